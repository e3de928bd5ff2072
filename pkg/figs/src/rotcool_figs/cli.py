"""Standalone figure scripts: rotcool-figs <kind> --input ... --out ..."""
from __future__ import annotations

import argparse
import sys

from .figures import FigureError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rotcool-figs",
        description="Render rotcool sweep/trajectory CSV files into images.")
    sub = ap.add_subparsers(dest="kind", required=True)

    hm = sub.add_parser("heatmap", help="2-axis sweep efficiency map")
    cv = sub.add_parser("curve", help="efficiency vs. swept parameter, one line per input")
    br = sub.add_parser("bars", help="population distribution bars from a trajectory")
    ls = sub.add_parser("loss", help="uncoupled-population loss vs. time")

    for p in (hm, cv, br, ls):
        p.add_argument("--input", action="append", required=True,
                       help="input CSV (repeatable for curve)")
        p.add_argument("--out", required=True, help="output image path")
        p.add_argument("--xlabel", default="")
        p.add_argument("--ylabel", default="")
        p.add_argument("--title", default="")
    for p in (hm, cv):
        p.add_argument("--value", choices=("efficiency", "loss"),
                       default="efficiency")
    cv.add_argument("--label", action="append", default=None,
                    help="legend label per input (repeatable)")
    br.add_argument("--which", choices=("first", "last"), default="last",
                    help="which sampled time to plot")
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    spec = FigureSpec(
        inputs=tuple(args.input),
        kind=args.kind,
        output=args.out,
        labels=tuple(args.label) if getattr(args, "label", None) else (),
        xlabel=args.xlabel,
        ylabel=args.ylabel,
        title=args.title,
        which=getattr(args, "which", "last"),
        value=getattr(args, "value", "efficiency"),
    )
    try:
        out = render(spec)
    except FigureError as exc:
        print(f"rotcool-figs: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
