"""Command line for figure rendering: plot --kind phase --in phase.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .render import LAYOUT, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render a logshrink benchmark CSV to a figure.")
    parser.add_argument("--kind", choices=sorted(LAYOUT), required=True)
    parser.add_argument("--in", dest="input", required=True, metavar="CSV")
    parser.add_argument("--out", dest="output", required=True, metavar="IMAGE")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    return render(FigureSpec(kind=args.kind, input=args.input,
                             output=args.output, title=args.title))


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
