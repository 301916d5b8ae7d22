"""Script entry: render an oscnet CSV with a preset or custom spec."""

from __future__ import annotations

import argparse
import sys

from .render import RenderError, SeriesSpec, render, render_preset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="Render oscnet CSV outputs as figures.")
    parser.add_argument("preset", help="figure2 | figure3 | custom")
    parser.add_argument("csv", help="input CSV file")
    parser.add_argument("-o", "--out", default=None, help="output image path")
    parser.add_argument("--x", help="x column (custom preset)")
    parser.add_argument("--y", help="y column (custom preset; omit for wide CSVs)")
    parser.add_argument("--group-by", dest="group_by", help="series column (custom preset)")
    parser.add_argument("--logx", action="store_true")
    parser.add_argument("--logy", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out or f"{args.preset}.png"
    try:
        if args.preset == "custom":
            if not args.x:
                print("error: custom preset needs --x", file=sys.stderr)
                return 2
            result = render(SeriesSpec(csv_path=args.csv, x=args.x, y=args.y,
                                       group_by=args.group_by, logx=args.logx,
                                       logy=args.logy, out_path=out))
        else:
            result = render_preset(args.preset, args.csv, out)
    except (RenderError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {result.out_path} ({result.series_count} series: "
          f"{', '.join(result.labels)})")
    return 0


def entrypoint():
    raise SystemExit(main())
