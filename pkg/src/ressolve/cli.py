"""Command-line driver.

Subcommands: `solve` an equation-system file, `translate` a formula plus a
model into an equation-system file, `normalize` a file's right-hand sides,
and `bes` for differential solving of boolean systems.  All diagnostics go
to stderr; exit codes are 0 success, 1 parse/usage error, 2 open system,
3 term blowup, 4 verification or differential failure, 5 semantic error in
a formula.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from . import bes as bes_mod
from . import oracle, syntax
from .errors import (
    BadConstants,
    NegationPresent,
    NotClosed,
    OddNegation,
    ParseError,
    RessolveError,
    TermBlowup,
)
from .extreal import INF, format_value, parse_value
from .nf import CNF, DNF, Normalizer, nf_to_expr
from .res import Equation, TraceStep, gauss_solve
from .modal import translate as modal_translate

MIN_ATOMS = 10**3
DEFAULT_ATOMS = 10**6


@dataclass
class Config:
    max_atoms: int = DEFAULT_ATOMS
    json_output: bool = False
    verify: bool = False
    trace: bool = False

    def __post_init__(self):
        if self.max_atoms < MIN_ATOMS:
            raise ValueError(f"term-size cap must be at least {MIN_ATOMS}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, like parse errors
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ressolve", description="Exact fixpoint equation solving over the extended reals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cap(p):
        p.add_argument("--max-atoms", type=int, default=DEFAULT_ATOMS, help="term-size cap (minimum 1000)")

    p_solve = sub.add_parser("solve", help="solve a closed equation-system file")
    p_solve.add_argument("file")
    p_solve.add_argument("--json", action="store_true", help="machine-readable output")
    p_solve.add_argument("--verify", action="store_true", help="run the independent checks")
    p_solve.add_argument("--trace", action="store_true", help="log the derivation steps")
    add_cap(p_solve)

    p_tr = sub.add_parser("translate", help="translate a formula over a model into an equation system")
    p_tr.add_argument("formula")
    p_tr.add_argument("model")
    p_tr.add_argument("out", help="output path, or - for stdout")
    add_cap(p_tr)

    p_norm = sub.add_parser("normalize", help="print each right-hand side in normal form")
    p_norm.add_argument("file")
    p_norm.add_argument("--form", choices=("cnf", "dnf"), required=True)
    add_cap(p_norm)

    p_bes = sub.add_parser("bes", help="solve a boolean system directly and via an embedding")
    p_bes.add_argument("file")
    p_bes.add_argument(
        "--encoding",
        default="literal",
        help="'literal' or 'const:CT,CF' with CT > CF (values like 1, -1/2, inf)",
    )
    add_cap(p_bes)

    return parser


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def _format_trace(steps: list[TraceStep]) -> list[str]:
    out = []
    for step in steps:
        before = syntax.format_equation(step.before) if step.before else ""
        after = syntax.format_equation(step.after) if step.after else ""
        if step.rule == "E4":
            out.append(f"E4: move {before[:-1]} behind the remaining equations")
        else:
            out.append(f"{step.rule}: {before[:-1]}  ==>  {after[:-1]}")
    return out


def cmd_solve(args) -> int:
    config = Config(max_atoms=args.max_atoms, json_output=args.json, verify=args.verify, trace=args.trace)
    system = syntax.parse_res(_read(args.file))
    normalizer = Normalizer(config.max_atoms)

    trace_log: list[TraceStep] | None = [] if config.trace else None
    checks_ok = True
    if config.verify:
        rng = random.Random(20240901)

        def on_solve(op, var, rhs, _solved):
            nonlocal checks_ok
            report = oracle.crosscheck_single(op, var, rhs, trials=4, rng=rng, normalizer=normalizer)
            if not report.ok:
                checks_ok = False
                for d in report.disagreements:
                    print(
                        f"crosscheck failed for {var}: solver {format_value(d.solver_value)}"
                        f" vs oracle {format_value(d.oracle_value)}",
                        file=sys.stderr,
                    )

        values = gauss_solve(system, normalizer=normalizer, trace_log=trace_log, on_solve=on_solve)
        residual = oracle.residual_check(system, values)
        if not residual.ok:
            checks_ok = False
            for row in residual.rows:
                if not row.equal:
                    print(
                        f"residual mismatch for {row.var}: {format_value(row.claimed)}"
                        f" != {format_value(row.recomputed)}",
                        file=sys.stderr,
                    )
        verified = checks_ok
    else:
        values = gauss_solve(system, normalizer=normalizer, trace_log=trace_log)
        verified = None

    if config.json_output:
        payload: dict = {
            "solution": [{"var": eq.var, "value": format_value(values[eq.var])} for eq in system]
        }
        if verified is not None:
            payload["verified"] = verified
        if trace_log is not None:
            payload["trace"] = _format_trace(trace_log)
        print(json.dumps(payload, separators=(",", ":")))
    else:
        if trace_log is not None:
            for line in _format_trace(trace_log):
                print(line)
        for eq in system:
            print(f"{eq.var} = {format_value(values[eq.var])}")
    return 0 if verified in (None, True) else 4


def cmd_translate(args) -> int:
    formula = syntax.parse_formula(_read(args.formula))
    model = syntax.parse_plts(_read(args.model))
    system = modal_translate(formula, model)
    text = syntax.format_res(system)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    return 0


def cmd_normalize(args) -> int:
    system = syntax.parse_res(_read(args.file))
    normalizer = Normalizer(args.max_atoms)
    polarity = CNF if args.form == "cnf" else DNF
    lines = ["res"]
    for eq in system:
        tree = normalizer.simplify_nf(normalizer.to_nf(eq.rhs, polarity))
        lines.append(syntax.format_equation(Equation(eq.op, eq.var, nf_to_expr(tree))))
    print("\n".join(lines))
    return 0


def _parse_encoding(text: str):
    if text == "literal":
        return None
    if text.startswith("const:"):
        parts = text[len("const:") :].split(",")
        if len(parts) != 2:
            raise BadConstants("expected const:CT,CF")
        try:
            c_true, c_false = parse_value(parts[0]), parse_value(parts[1])
        except ValueError as exc:
            raise BadConstants(f"bad constant: {exc}")
        if not c_true > c_false:
            raise BadConstants(f"need CT > CF, got {parts[0]} <= {parts[1]}")
        return (c_true, c_false)
    raise BadConstants(f"unknown encoding {text!r}")


def cmd_bes(args) -> int:
    constants = _parse_encoding(args.encoding)
    system = syntax.parse_bes(_read(args.file))
    direct = bes_mod.solve_bes_direct(system)
    normalizer = Normalizer(args.max_atoms)

    if constants is None:
        embedded = bes_mod.embed_literal(system)
        truthy = {var: value == INF for var, value in gauss_solve(embedded, normalizer=normalizer).items()}
    else:
        c_true, c_false = constants
        embedded = bes_mod.embed_const(system, c_true, c_false)
        real_values = gauss_solve(embedded, normalizer=normalizer)
        truthy = {var: value == c_true for var, value in real_values.items()}

    agree = True
    for eq in system:
        d = direct[eq.var]
        e = truthy[eq.var]
        status = "agree" if d == e else "DISAGREE"
        if d != e:
            agree = False
        print(f"{eq.var}: direct={'true' if d else 'false'} embedded={'true' if e else 'false'} {status}")
    print("agreement: " + ("yes" if agree else "no"))
    return 0 if agree else 4


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "translate":
            return cmd_translate(args)
        if args.command == "normalize":
            return cmd_normalize(args)
        if args.command == "bes":
            return cmd_bes(args)
        raise AssertionError(f"unknown command {args.command}")
    except (ParseError, OddNegation, NegationPresent, BadConstants, ValueError) as exc:
        print(f"ressolve: {exc}", file=sys.stderr)
        return 1
    except NotClosed as exc:
        print(f"ressolve: {exc}", file=sys.stderr)
        return 2
    except TermBlowup as exc:
        print(f"ressolve: {exc}", file=sys.stderr)
        return 3
    except RessolveError as exc:
        print(f"ressolve: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    raise SystemExit(main())
