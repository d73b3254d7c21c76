"""Render benchmark CSVs into static figures.

Three figure kinds mirror the three experiment CSVs: ``phase`` (two panels,
average error and recovery probability versus sparsity K), ``path`` (average
squared residual versus enforced sparsity), and ``completion`` (average
Frobenius error versus iteration, log scale).  One line per algorithm.

Alongside each image the renderer writes ``<image>.series.csv`` holding
exactly the plotted points, so figure correctness is testable without pixel
comparison.
"""

from __future__ import annotations

import csv
import os
import sys
import tempfile
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

REQUIRED_COLUMNS = ("experiment", "algorithm", "trials", "value_kind", "value")

# per kind: sweep-coordinate column, panels as (value_kind, axis label)
LAYOUT = {
    "phase": ("K", [("avg_error", "average error ||x - x*||"),
                    ("recovery_prob", "probability of exact recovery")]),
    "path": ("sparsity_k", [("avg_residual_sq", "average squared residual")]),
    "completion": ("iteration", [("avg_frob_error", "average Frobenius error")]),
}

X_LABEL = {"phase": "sparsity K", "path": "enforced sparsity k",
           "completion": "iteration"}


@dataclass(frozen=True)
class FigureSpec:
    kind: str  # phase | path | completion
    input: str
    output: str
    title: str | None = None

    def __post_init__(self):
        if self.kind not in LAYOUT:
            raise ValueError(f"unknown figure kind {self.kind!r}")


class RenderError(Exception):
    pass


def _read_rows(path: str, kind: str) -> list[dict]:
    coord_col, _ = LAYOUT[kind]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (*REQUIRED_COLUMNS, coord_col):
            if col not in header:
                raise RenderError(f"missing column: {col}")
        rows = list(reader)
    if not rows:
        raise RenderError("no data rows")
    bad = {r["experiment"] for r in rows} - {kind}
    if bad:
        raise RenderError(
            f"experiment column holds {sorted(bad)}, expected {kind!r}")
    return rows


def _series(rows: list[dict], kind: str):
    """(value_kind, algorithm) -> sorted list of (x, y) points."""
    coord_col, panels = LAYOUT[kind]
    wanted = {vk for vk, _ in panels}
    out: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for r in rows:
        if r["value_kind"] not in wanted:
            continue
        key = (r["value_kind"], r["algorithm"])
        out.setdefault(key, []).append((float(r[coord_col]), float(r["value"])))
    for pts in out.values():
        pts.sort(key=lambda p: p[0])
    if not out:
        raise RenderError("no rows matched the expected value kinds")
    return out


def _write_series_dump(path: str, series, kind: str) -> None:
    lines = ["panel,algorithm,x,y"]
    coord_col, panels = LAYOUT[kind]
    for vk, _ in panels:
        for (value_kind, alg), pts in sorted(series.items()):
            if value_kind != vk:
                continue
            for x, y in pts:
                lines.append(f"{value_kind},{alg},{x:.17g},{y:.17g}")
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


def render(spec: FigureSpec) -> int:
    """Write the figure and its series dump; returns a process exit code."""
    try:
        if not os.path.exists(spec.input):
            raise RenderError(f"input not found: {spec.input}")
        rows = _read_rows(spec.input, spec.kind)
        series = _series(rows, spec.kind)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    _, panels = LAYOUT[spec.kind]
    fig, axes = plt.subplots(len(panels), 1, figsize=(6.4, 3.6 * len(panels)),
                             squeeze=False)
    for ax, (vk, ylabel) in zip(axes[:, 0], panels):
        for (value_kind, alg), pts in sorted(series.items()):
            if value_kind != vk:
                continue
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            ax.plot(xs, ys, marker="o", markersize=3, label=alg)
        ax.set_xlabel(X_LABEL[spec.kind])
        ax.set_ylabel(ylabel)
        if spec.kind == "completion":
            ax.set_yscale("log")
        ax.grid(True, alpha=0.3)
        ax.legend()
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)

    _write_series_dump(spec.output + ".series.csv", series, spec.kind)
    return 0
