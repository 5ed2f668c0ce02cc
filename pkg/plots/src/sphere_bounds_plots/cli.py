"""Command line entry: render <csv> --mode rho|ell --out <path> [--format svg|png]."""

import argparse
import sys
from typing import Optional, Sequence

from .render import SchemaError, render

EXIT_OK = 0
EXIT_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render", description=__doc__)
    parser.add_argument("csv", help="comparison sweep CSV produced by sphere-bounds")
    parser.add_argument("--mode", choices=("rho", "ell"), required=True,
                        help="x axis: normalized radius or block count")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--format", choices=("svg", "png"), default=None,
                        help="image format (default: from the --out suffix, else svg)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = render(args.csv, args.mode, args.out, args.format)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(
        f"wrote {args.out} ({len(manifest['series'])} series) and "
        f"{args.out}.manifest.json",
        file=sys.stderr,
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
