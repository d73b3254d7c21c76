"""Command-line entry point: experiment drivers with deterministic CSV output.

Subcommands: ``phase`` (noiseless recovery sweep), ``noisy-path`` (residual
vs. enforced sparsity), ``complete`` (matrix-completion race), ``threshold``
(scalar operator inspection), ``selfcheck`` (property suites).

Exit codes: 0 success, 1 usage or validation error, 2 numerical failure or
selfcheck failure.  CSVs are written atomically (temp file, then rename)
with 17 significant digits, so identical flags give byte-identical files.
The ``LOGSHRINK_THREADS`` environment variable (0 = auto) controls trial
parallelism without affecting output bytes.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import experiments, selfcheck
from .core import NumericalError
from .experiments import EnsembleSpec, MetricsRow
from .solver import check_delta_condition
from .thresholding import (
    ThresholdKind,
    ThresholdRule,
    hard_threshold,
    log_threshold,
    soft_threshold,
)

HEADERS = {
    "phase": "experiment,algorithm,K,trials,value_kind,value",
    "path": "experiment,algorithm,sparsity_k,trials,value_kind,value",
    "completion": "experiment,algorithm,iteration,trials,value_kind,value",
}

FILENAMES = {"phase": "phase.csv", "path": "path.csv", "completion": "completion.csv"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract here is 1
    def error(self, message):
        raise UsageError(message)


def parse_range(text: str, flag: str) -> list[int]:
    """Parse ``start:stop:step`` (stop inclusive when aligned) or a single int."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            start, stop = int(parts[0]), int(parts[1])
            step = 1
        elif len(parts) == 3:
            start, stop = int(parts[0]), int(parts[1])
            step = int(parts[2])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"{flag}: expected INT or START:STOP[:STEP], got {text!r}")
    if step < 1:
        raise UsageError(f"{flag}: step must be >= 1")
    if stop < start:
        raise UsageError(f"{flag}: stop must be >= start")
    return list(range(start, stop + 1, step))


def _threads_from_env() -> int:
    raw = os.environ.get("LOGSHRINK_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise UsageError(f"LOGSHRINK_THREADS: expected an integer, got {raw!r}")
    if threads < 0:
        raise UsageError("LOGSHRINK_THREADS must be nonnegative")
    return threads


def _check_output_dir(out_dir: str) -> None:
    if not os.path.isdir(out_dir):
        raise UsageError(f"--out: {out_dir!r} is not a directory")
    if not os.access(out_dir, os.W_OK):
        raise UsageError(f"--out: {out_dir!r} is not writable")


def _format_value(v: float) -> str:
    return format(v, ".17g")


def write_rows(path: str, header: str, rows: list[MetricsRow]) -> None:
    """Serialize rows; sweep coordinates print as integers."""
    lines = [header]
    for r in rows:
        lines.append(",".join([
            r.experiment, r.algorithm, str(int(r.sweep_coord)), str(r.trials),
            r.value_kind, _format_value(r.value),
        ]))
    payload = "\n".join(lines) + "\n"
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)),
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_phase(args) -> int:
    K_grid = parse_range(args.K, "--K")
    if any(k >= args.N for k in K_grid):
        raise UsageError(f"--K: sparsity levels must be below N = {args.N}")
    _check_output_dir(args.out)
    try:
        spec = EnsembleSpec(M=args.M, N=args.N, K_grid=tuple(K_grid),
                            trials=args.trials, noise_sigma=0.0,
                            max_iters=args.iters, master_seed=args.seed,
                            delta=args.delta)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = experiments.run_noiseless_sweep(spec, threads=_threads_from_env())
    write_rows(os.path.join(args.out, FILENAMES["phase"]), HEADERS["phase"], rows)
    return 0


def cmd_noisy_path(args) -> int:
    k_grid = parse_range(args.k, "--k")
    if args.noise <= 0:
        raise UsageError("--noise must be positive for noisy-path; "
                         "use the phase subcommand for noiseless sweeps")
    if any(k >= args.N for k in k_grid):
        raise UsageError(f"--k: sparsity levels must be below N = {args.N}")
    if not 0 <= args.Ktrue < args.N:
        raise UsageError(f"--Ktrue must lie in [0, N); N = {args.N}")
    _check_output_dir(args.out)
    try:
        spec = EnsembleSpec(M=args.M, N=args.N, K_grid=(),
                            trials=args.trials, noise_sigma=args.noise,
                            max_iters=args.iters, master_seed=args.seed,
                            delta=args.delta)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = experiments.run_noisy_path(spec, args.Ktrue, k_grid,
                                      threads=_threads_from_env())
    write_rows(os.path.join(args.out, FILENAMES["path"]), HEADERS["path"], rows)
    return 0


def cmd_complete(args) -> int:
    if not 0.0 < args.obs <= 1.0:
        raise UsageError("--obs must lie in (0, 1]")
    if not 1 <= args.rank <= args.N:
        raise UsageError(f"--rank must lie in [1, N]; N = {args.N}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.iters < 1:
        raise UsageError("--iters must be >= 1")
    _check_output_dir(args.out)
    rows = experiments.run_completion_bench(
        args.N, args.rank, args.obs, args.trials, args.iters, args.seed,
        delta=args.delta, threads=_threads_from_env())
    write_rows(os.path.join(args.out, FILENAMES["completion"]),
               HEADERS["completion"], rows)
    return 0


def cmd_threshold(args) -> int:
    kind = ThresholdKind(args.kind)
    try:
        if kind is ThresholdKind.SOFT:
            value = float(soft_threshold(args.x, args.lam))
        elif kind is ThresholdKind.HARD:
            value = float(hard_threshold(args.x, args.lam))
        else:
            rule = ThresholdRule(kind, args.lam, args.delta)
            value = float(log_threshold(args.x, args.lam, args.delta))
    except ValueError as exc:
        raise UsageError(str(exc))
    print(f"value={_format_value(value)}")
    if kind is ThresholdKind.LOG:
        print(f"x0={_format_value(rule.dead_zone)}")
        report = check_delta_condition(args.lam, args.delta)
        print(f"delta_lhs={_format_value(report.lhs)}")
        print(f"delta_rhs={_format_value(report.rhs)}")
        print(f"delta_satisfied={str(report.satisfied).lower()}")
    return 0


def cmd_selfcheck(args) -> int:
    names = [args.suite] if args.suite else list(selfcheck.SUITES)
    results = selfcheck.run_suites(names, args.trials, args.seed)
    all_ok = True
    for name, passed, detail in results:
        print(f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")
        all_ok = all_ok and passed
    return 0 if all_ok else 2


def build_parser() -> _Parser:
    parser = _Parser(prog="logshrink",
                     description="Sparse recovery and matrix completion by "
                                 "iterative soft/hard/log thresholding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phase", help="noiseless recovery sweep over K")
    p.add_argument("--M", type=int, default=100)
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--K", default="10:60:10", help="sparsity grid START:STOP[:STEP]")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--iters", type=int, default=250)
    p.add_argument("--delta", type=float, default=0.001)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("noisy-path", help="residual vs. enforced sparsity")
    p.add_argument("--M", type=int, default=100)
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--Ktrue", type=int, default=10)
    p.add_argument("--k", default="1:30", help="enforced sparsity grid START:STOP[:STEP]")
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--iters", type=int, default=250)
    p.add_argument("--delta", type=float, default=0.001)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_noisy_path)

    p = sub.add_parser("complete", help="matrix-completion convergence race")
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--obs", type=float, default=0.3)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--iters", type=int, default=250)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("threshold", help="evaluate one scalar operator")
    p.add_argument("--kind", choices=[k.value for k in ThresholdKind], required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.01)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("selfcheck", help="run the runtime property suites")
    p.add_argument("--suite", choices=sorted(selfcheck.SUITES), default=None)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=12345)
    p.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
