"""Command-line interface: run scenarios, sweep parameters, self-check.

Exit codes: 0 success, 1 configuration/validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys

import yaml

from . import __version__
from .checks import run_checks
from .scenario import ScenarioError, load_scenario, run_scenario, shipped_scenarios, sweep

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qscramble",
        description="Bipartite OTOC, operator entanglement, and entropy production "
                    "for closed and GKSL-open quantum models.")
    parser.add_argument("--version", action="version", version=f"qscramble {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario file and write its CSV")
    run_p.add_argument("scenario", help="path to a scenario file, or a shipped scenario name")
    run_p.add_argument("--out", default=".", help="output directory (default: cwd)")
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario rng seed")
    run_p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp metadata line (byte-reproducible output)")

    sweep_p = sub.add_parser("sweep", help="run a scenario once per axis value")
    sweep_p.add_argument("scenario", help="path to a scenario file, or a shipped scenario name")
    sweep_p.add_argument("--axis", required=True, metavar="NAME=v1,v2,...",
                         help="parameter axis, e.g. coupling=0.1,0.5,1.0 or theta=0,pi/4")
    sweep_p.add_argument("--out", default=".", help="output directory (default: cwd)")
    sweep_p.add_argument("--seed", type=int, default=None)
    sweep_p.add_argument("--no-timestamp", action="store_true")

    check_p = sub.add_parser("check", help="run the built-in invariant/oracle suite")
    check_p.add_argument("--fock-convergence", action="store_true",
                         help="also report the Dicke OTOC change when the Fock cutoff doubles")
    check_p.add_argument("--coupling", type=float, default=1.5,
                         help="coupling used by the Fock convergence report")

    sub.add_parser("list-scenarios", help="list the scenario files shipped with the package")
    return parser


def _parse_axis(spec: str) -> tuple[str, list]:
    if "=" not in spec:
        raise ScenarioError("axis", f"expected NAME=v1,v2,..., got {spec!r}")
    name, _, raw_values = spec.partition("=")
    name = name.strip()
    values = [v.strip() for v in raw_values.split(",") if v.strip()]
    if not name or not values:
        raise ScenarioError("axis", f"expected NAME=v1,v2,..., got {spec!r}")
    # YAML scalar parsing keeps ints/floats; 'pi' expressions stay strings
    return name, [yaml.safe_load(v) for v in values]


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = load_scenario(args.scenario)
            _, path = run_scenario(config, out_dir=args.out, seed=args.seed,
                                   timestamp=not args.no_timestamp)
            print(f"wrote {path}")
            return EXIT_OK

        if args.command == "sweep":
            config = load_scenario(args.scenario)
            axis, values = _parse_axis(args.axis)
            results = sweep(config, axis, values, out_dir=args.out, seed=args.seed,
                            timestamp=not args.no_timestamp)
            failures = 0
            for value, outcome in results:
                if isinstance(outcome, Exception):
                    failures += 1
                    print(f"{axis}={value}: FAILED: {outcome}", file=sys.stderr)
                else:
                    print(f"{axis}={value}: wrote {outcome}")
            if failures:
                validation_only = all(isinstance(o, ScenarioError)
                                      for _, o in results if isinstance(o, Exception))
                return EXIT_VALIDATION if validation_only else EXIT_RUNTIME
            return EXIT_OK

        if args.command == "check":
            ok = run_checks(fock=args.fock_convergence, coupling=args.coupling)
            return EXIT_OK if ok else EXIT_RUNTIME

        if args.command == "list-scenarios":
            for name, path in shipped_scenarios().items():
                with open(path, "r", encoding="utf-8") as fh:
                    raw = yaml.safe_load(fh) or {}
                desc = str(raw.get("description", "")).strip()
                print(f"{name}: {desc}" if desc else name)
            return EXIT_OK

        raise AssertionError(f"unhandled command {args.command!r}")
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # runtime failure with scenario context
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
