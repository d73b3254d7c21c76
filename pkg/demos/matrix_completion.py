"""Matrix completion by alternating data replacement with spectral top-K.

A rank-2 50x50 matrix with 30% of the entries observed.  Each iteration
replaces the observed entries by their data values and then zeroes all but
the two leading singular values with the soft, hard, or log rule.  Soft
spectral shrinkage biases the kept singular values and stalls; the log rule
tracks hard thresholding while staying a smooth spectrum map.
"""

import numpy as np

from logshrink import SVT_ALGORITHMS, SolverConfig, complete, gen_completion_problem
from logshrink.experiments import KIND_BY_ALGORITHM

N, rank, obs_frac = 50, 2, 0.3
problem = gen_completion_problem(N, rank, obs_frac, seed=4041)
scale = np.linalg.norm(problem.x_true)
print(f"instance: {N}x{N}, rank {rank}, {problem.n_observed} observed entries "
      f"({100 * obs_frac:.0f}%), ||X*||_F = {scale:.1f}\n")

config = SolverConfig(max_iters=150, step_tol=0.0)
checkpoints = [0, 10, 25, 50, 100, 150]
print(f"relative Frobenius error ||X_n - X*||_F / ||X*||_F at iterations {checkpoints}:")
for alg in SVT_ALGORITHMS:
    _, trace = complete(problem, KIND_BY_ALGORITHM[alg], config)
    errs = trace.frob_error / scale
    row = " ".join(f"{errs[min(c, len(errs) - 1)]:.2e}" for c in checkpoints)
    print(f"  {alg:>8}: {row}")

print("\nRanks stay at the target after every thresholding step; the trace")
print("records them alongside the observed-entry residual for diagnostics.")
