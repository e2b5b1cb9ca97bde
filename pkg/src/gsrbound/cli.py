"""Command-line entry point: ``gsrbound run | verify | bands``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import GsrError


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gsrbound", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the scenarios of a JSON spec file")
    run.add_argument("--spec", required=True)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--plots", action="store_true", help="also write plot series and PNG figures")
    run.add_argument("--seed", type=int, default=None, help="override the spec seed")

    ver = sub.add_parser("verify", help="run a seeded verification suite")
    ver.add_argument("--suite", required=True, choices=("gsr", "thm41", "thm43", "lt", "szego"))
    ver.add_argument("--trials", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)

    bands = sub.add_parser("bands", help="band edges of a periodic Jacobi operator")
    bands.add_argument("--period", type=int, required=True)
    bands.add_argument("--a", type=_float_list, required=True)
    bands.add_argument("--b", type=_float_list, required=True)
    bands.add_argument("--plot", default=None, help="write a band diagram PNG to this path")
    return p


def _cmd_run(args) -> int:
    from .plotting import render_figures
    from .report import emit_plotdata, emit_report
    from .runner import run_spec

    report = run_spec(args.spec, args.seed)
    for path in emit_report(report, args.out, args.format):
        print(f"wrote {path}")
    if args.plots:
        for path in emit_plotdata(report, args.out) + render_figures(report, args.out):
            print(f"wrote {path}")
    for v in report.verdicts:
        print(f"[{'PASS' if v['pass'] else 'FAIL'}] {v['index']:02d} {v['kind']} {v['name']}")
    return report.exit_code


def _cmd_verify(args) -> int:
    from .suites import SUITES

    kwargs = {}
    if args.suite != "lt":
        kwargs["seed"] = args.seed
        if args.trials is not None:
            kwargs["trials"] = args.trials
    elif args.trials is not None:
        print("note: the lt suite runs fixed scenarios; --trials ignored", file=sys.stderr)
    result = SUITES[args.suite](**kwargs)
    print(result.line())
    return 0 if result.passed else 1


def _cmd_bands(args) -> int:
    from .floquet import floquet_data
    from .operator import JacobiCoefficients

    p = args.period
    a = args.a * p if len(args.a) == 1 else args.a
    b = args.b * p if len(args.b) == 1 else args.b
    if len(a) != p or len(b) != p:
        raise GsrError(f"coefficient lists must have length {p} (or 1)")
    fd = floquet_data(JacobiCoefficients.periodic(a, b))
    print(json.dumps({"period": p, "edges": list(map(float, fd.edges)), "bands": [list(x) for x in fd.bands],
                      "touching": list(map(float, fd.touching))}, indent=2))
    if args.plot:
        from .plotting import bands_figure

        bands_figure(fd.bands, args.plot)
    return 0


COMMANDS = {"run": _cmd_run, "verify": _cmd_verify, "bands": _cmd_bands}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GsrError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
