"""Walk through the three scalar thresholding operators.

Soft thresholding shifts every surviving entry toward zero by a constant;
hard thresholding keeps survivors untouched; log thresholding sits between
the two, shrinking small survivors noticeably and large ones barely at all.
This script prints the operators side by side, locates the log dead zone
and the jump at its edge, and evaluates the delta-condition report.
"""

import numpy as np

from logshrink import (
    check_delta_condition,
    hard_threshold,
    log_threshold,
    soft_threshold,
)

lam, delta = 0.5, 0.01
x0 = np.sqrt(2 * lam) - delta

print(f"log rule with lam={lam}, delta={delta}: dead zone x0 = {x0:.4f}")
print(f"soft/hard baselines use the same threshold t = x0 for comparison\n")

print(f"{'z':>8} {'soft':>10} {'hard':>10} {'log':>10}")
for z in [0.2, 0.8, 0.98, 0.9901, 1.1, 1.5, 2.0, 4.0, 10.0]:
    s = soft_threshold(z, x0)
    h = hard_threshold(z, x0)
    L = log_threshold(z, lam, delta)
    print(f"{z:8.4f} {s:10.4f} {h:10.4f} {L:10.4f}")

print("\nJust above the dead zone the log operator jumps to (x0 - delta)/2:")
eps = 1e-9
print(f"  L(x0 + 1e-9) = {log_threshold(x0 + eps, lam, delta):.6f}"
      f"   (x0 - delta)/2 = {(x0 - delta) / 2:.6f}")

print("\nFor large z the log shrinkage vanishes (soft keeps subtracting):")
for z in [10.0, 100.0, 1000.0]:
    print(f"  z = {z:7.1f}: z - log = {z - log_threshold(z, lam, delta):.6f}"
          f"   z - soft = {z - soft_threshold(z, x0):.6f}")

rep = check_delta_condition(lam, delta)
print(f"\ndelta-condition: lam/delta + 2*delta = {rep.lhs:.4f} "
      f"{'>' if rep.satisfied else '<='} 2*sqrt(2*lam) = {rep.rhs:.4f}"
      f" -> {'satisfied' if rep.satisfied else 'violated'}")
print("When it holds, fixed points of the log iteration are local minima.")
