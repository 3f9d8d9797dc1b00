"""Command-line entry point.

Exit codes: 0 success, 2 invalid input, 3 a numerical guard tripped.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from ..opalgebra.hamiltonians import HamiltonianKind, HamiltonianSpec
from ..opalgebra.polynomial import DegreeGuardError
from ..propagators import TruncationError
from .chaos import chaos_demo
from .config import ScenarioConfig
from .heisenberg import heisenberg_print
from .scenario import execute_scenario

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

# raised by guards inside the numerical code
NUMERICAL_ERRORS = (DegreeGuardError, TruncationError, OverflowError, FloatingPointError, ArithmeticError)


class UsageError(Exception):
    pass


def load_config(path: str) -> ScenarioConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return ScenarioConfig.model_validate(data)


def _format_validation(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        where = ".".join(str(x) for x in err["loc"]) or "<root>"
        lines.append(f"{where}: {err['msg']}")
    return "\n".join(lines)


def _cmd_run(args, out) -> int:
    config = load_config(args.config)
    if args.command == "compare" and len(config.methods) != 2:
        raise UsageError("compare needs a config with exactly two methods")
    artifacts = execute_scenario(config)
    for line in artifacts.summary_lines():
        print(line, file=out)
    artifacts.write(config)
    return EXIT_OK


def _parse_number(text: str):
    # keep decimal input exact so the series stays in rational arithmetic
    try:
        return Fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _cmd_heisenberg(args, out) -> int:
    kind = HamiltonianKind(args.hamiltonian.replace("-", "_"))
    if kind is HamiltonianKind.CUSTOM:
        raise UsageError("custom Hamiltonians are not available from the command line")
    H = HamiltonianSpec(kind, mass=args.mass, force=args.force, omega=args.omega, lam=args.lam)
    out.write(heisenberg_print(H, args.op, args.order))
    return EXIT_OK


def _cmd_chaos(args, out) -> int:
    report = chaos_demo(args.lam, args.width, args.tmax, args.samples, quartic=args.quartic,
                        keep_density=args.output_dir is not None)
    for t, left, right, npk in zip(report.times, report.left_mass, report.right_mass, report.peak_counts):
        print(f"t={t:.6f}  left={left:.12f}  right={right:.12f}  peaks={npk}", file=out)
    summary = report.summary()
    print(json.dumps(summary, sort_keys=True), file=out)
    if args.output_dir is not None:
        d = Path(args.output_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, text in sorted(report.density.items()):
            (d / f"density_{i:04d}.csv").write_text(text)
        (d / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_NUMERICAL if report.truncated else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opevolve", description="Operator-method wavefunction evolution.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("run", "run a scenario config"),
                       ("compare", "run a two-method scenario and compare them")):
        p = sub.add_parser(name, help=text)
        p.add_argument("config")
        p.set_defaults(func=_cmd_run)

    h = sub.add_parser("heisenberg", help="print the Heisenberg series of q or p")
    h.add_argument("--hamiltonian", required=True,
                   choices=["free", "constant-force", "harmonic", "inverted-harmonic"])
    h.add_argument("--op", choices=["q", "p"], default="q")
    h.add_argument("--order", type=int, default=4)
    h.add_argument("--mass", type=_parse_number, default=Fraction(1))
    h.add_argument("--force", type=_parse_number, default=Fraction(0))
    h.add_argument("--omega", type=_parse_number, default=Fraction(0))
    h.add_argument("--lambda", dest="lam", type=_parse_number, default=Fraction(0))
    h.set_defaults(func=_cmd_heisenberg)

    c = sub.add_parser("chaos-demo", help="packet released at the top of an inverted oscillator")
    c.add_argument("--lambda", dest="lam", type=float, default=1.0)
    c.add_argument("--width", type=float, default=0.5)
    c.add_argument("--tmax", type=float, default=3.0)
    c.add_argument("--samples", type=int, default=30)
    c.add_argument("--quartic", type=float, default=0.0,
                   help="optional q^4 confinement (0 gives the pure inverted oscillator)")
    c.add_argument("--output-dir", default=None)
    c.set_defaults(func=_cmd_chaos)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(_format_validation(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except NUMERICAL_ERRORS as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
