"""Command line: render a figure recipe to an image file.

Exit codes: 0 success, 1 recipe/validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .reader import RecipeError
from .recipes import load_recipe, render, shipped_recipes


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render qscramble CSV time series into figure panels.")
    parser.add_argument("--version", action="version", version=f"plotkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    render_p = sub.add_parser("render", help="render one recipe file")
    render_p.add_argument("recipe", help="path to a recipe file, or a shipped recipe name")
    render_p.add_argument("--out", default=None, help="output image path "
                          "(default: the recipe's 'output' field)")
    render_p.add_argument("--data-dir", default=None,
                          help="directory for relative CSV paths "
                               "(default: the recipe file's directory)")

    sub.add_parser("list-recipes", help="list the recipe files shipped with the package")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "render":
            recipe, default_dir = load_recipe(args.recipe)
            data_dir = args.data_dir if args.data_dir is not None else default_dir
            out = render(recipe, data_dir=data_dir, out_path=args.out)
            print(f"wrote {out}")
            return 0
        if args.command == "list-recipes":
            import yaml
            for name, path in shipped_recipes().items():
                with open(path, "r", encoding="utf-8") as fh:
                    raw = yaml.safe_load(fh) or {}
                desc = str(raw.get("description", "")).strip()
                print(f"{name}: {desc}" if desc else name)
            return 0
        raise AssertionError(f"unhandled command {args.command!r}")
    except RecipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
