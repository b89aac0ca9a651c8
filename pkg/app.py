"""Middle Hedgehog Lab command line.

Exit codes: 0 ok, 2 usage or unreadable body file (a non-convex vertex cycle
included), 3 violated precondition, 4 internal invariant trap.
"""
import argparse
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from core.errors import BodyFileError, InternalInvariantError, PreconditionError
from core.models import LAYER_NAMES
from modules.cli import logic

logger = logging.getLogger("middle_hedgehog")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a decimal integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="middle-hedgehog",
        description="Middle hedgehogs, convexity points and hull-vertex perturbations of planar convex bodies.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on standard error")
    commands = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("input", help="body file (polygon, arcgon or fourier JSON)")
    shared.add_argument("--json", action="store_true", help="machine-readable report")
    shared.add_argument("--seed", type=int, default=0, help="random seed (decimal)")

    hedgehog = commands.add_parser("hedgehog", parents=[shared], help="middle sets, corners and hull count")
    hedgehog.add_argument("--svg", metavar="PATH")

    convexity = commands.add_parser("convexity", parents=[shared], help="convexity points and a triple")
    convexity.add_argument("--svg", metavar="PATH")
    convexity.add_argument("--oracle", type=_positive_int, metavar="N", help="cross-check on an N x N grid")
    convexity.add_argument("--csv", metavar="PATH")

    perturb = commands.add_parser("perturb", parents=[shared], help="raise the hull vertex count by cuts")
    perturb.add_argument("--eps", type=_positive_fraction, required=True)
    perturb.add_argument("--target", type=_positive_int, required=True)
    perturb.add_argument("--smooth", action="store_true", help="also smooth the result by arcs")
    perturb.add_argument("--out", default=".", metavar="DIR", help="directory for trace and body files")
    perturb.add_argument("--svg", metavar="PATH")
    perturb.add_argument("--csv", metavar="PATH")

    render = commands.add_parser("render", parents=[shared], help="SVG figure")
    render.add_argument("--svg", metavar="PATH", required=True)
    render.add_argument("--layers", nargs="+", choices=LAYER_NAMES)
    render.add_argument("--width", type=_positive_int)
    render.add_argument("--height", type=_positive_int)
    render.add_argument("--labels", action="store_true")
    render.add_argument("--trace", metavar="PATH", help="trace file for the cut overlay")

    oracle = commands.add_parser("oracle", parents=[shared], help="brute-force convexity grid")
    oracle.add_argument("--grid", type=_positive_int, default=64)
    oracle.add_argument("--svg", metavar="PATH", help="body with the grid hits as convexity points")
    oracle.add_argument("--csv", metavar="PATH")
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "hedgehog":
        print(logic.cmd_hedgehog(args.input, svg=args.svg, json_output=args.json))
    elif args.command == "convexity":
        print(logic.cmd_convexity(args.input, oracle=args.oracle, svg=args.svg, csv=args.csv, json_output=args.json))
    elif args.command == "perturb":
        text, error = logic.cmd_perturb(
            args.input, args.eps, args.target, seed=args.seed, smooth=args.smooth,
            out_dir=args.out, svg=args.svg, csv=args.csv, json_output=args.json,
        )
        print(text)
        if error:
            print(f"error: {error}", file=sys.stderr)
            return EXIT_INTERNAL
    elif args.command == "render":
        print(logic.cmd_render(
            args.input, args.svg, layers=args.layers, width=args.width, height=args.height,
            labels=args.labels, trace_path=args.trace,
        ))
    elif args.command == "oracle":
        print(logic.cmd_oracle(args.input, args.grid, svg=args.svg, csv=args.csv, json_output=args.json))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return _dispatch(args)
    except BodyFileError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InternalInvariantError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
