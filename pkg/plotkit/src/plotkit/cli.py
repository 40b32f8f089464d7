"""qi-plot: render one qi-cd-eval figure CSV set to PNG and SVG."""

from __future__ import annotations

import argparse
import sys

from .csvio import CsvFormatError, MissingColumnError
from .recipes import RECIPES
from .render import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qi-plot",
        description="Render qi-cd-eval CSV output into figures.",
    )
    parser.add_argument("figure_id", help=f"one of: {' '.join(sorted(RECIPES))}")
    parser.add_argument("--data", required=True, help="directory holding the input CSVs")
    parser.add_argument("--out", required=True, help="directory for the rendered images")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = render(args.figure_id, args.data, args.out)
    except (ValueError, MissingColumnError, OSError) as exc:
        # CsvFormatError is a ValueError; all carry file/line context.
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
