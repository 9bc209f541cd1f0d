"""Command-line driver: pxpfigs render --recipe <file> --out <dir>."""

import argparse
import sys

from .loading import RecipeValidationError
from .recipes import load_recipe
from .render import render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pxpfigs",
        description="render figures from completed run directories",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("render", help="render one figure recipe")
    rp.add_argument("--recipe", required=True, help="recipe JSON file")
    rp.add_argument("--out", required=True, help="output directory")
    rp.add_argument(
        "--base",
        default=None,
        help="directory the recipe's run paths are relative to "
        "(default: current directory)",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        recipe = load_recipe(args.recipe)
        written = render(recipe, args.out, base=args.base)
    except RecipeValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
