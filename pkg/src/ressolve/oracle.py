"""Independent verification of solver results.

`residual_check` re-evaluates every equation at a claimed solution.
`univariate_fixed_point` computes the extremal fixpoint of one equation
geometrically: the instantiated right-hand side is a monotone piecewise
linear function of the remaining variable, so its least/greatest diagonal
crossing is found by enumerating candidate abscissae exactly.  The two
routes share only the clause decomposition and the expression evaluator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from . import extreal
from .errors import MissingVariable
from .expr import Const, Expr, Valuation, evaluate, occ, substitute
from .extreal import INF, NEG_INF, ExtReal
from .nf import CNF, DNF, Leaf, Normalizer
from .res import RES
from .solver import ClauseDecomposition, FixOp, expose, solve_single


@dataclass(frozen=True)
class ResidualRow:
    var: str
    claimed: ExtReal
    recomputed: ExtReal
    equal: bool


@dataclass(frozen=True)
class ResidualReport:
    rows: tuple[ResidualRow, ...]
    ok: bool

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "rows": [
                {
                    "var": r.var,
                    "claimed": extreal.format_value(r.claimed),
                    "recomputed": extreal.format_value(r.recomputed),
                    "equal": r.equal,
                }
                for r in self.rows
            ],
        }


def residual_check(system: RES, solution: Mapping[str, ExtReal]) -> ResidualReport:
    """Necessary condition: each bound variable is a fixpoint of its equation."""
    for eq in system:
        if eq.var not in solution:
            raise MissingVariable(f"solution lacks a value for {eq.var}")
    env = Valuation(solution)
    rows = []
    for eq in system:
        recomputed = evaluate(eq.rhs, env)
        claimed = solution[eq.var]
        rows.append(ResidualRow(eq.var, claimed, recomputed, claimed == recomputed))
    return ResidualReport(tuple(rows), all(r.equal for r in rows))


def _finite_lines(dec: ClauseDecomposition, valuation: Valuation) -> list[tuple[Fraction, Fraction]]:
    """Slope/intercept pairs of every piece that is linear on the finite axis;
    the variable-free residues count as horizontal lines."""
    lines = []
    for clause in dec.clauses:
        residue = evaluate(clause.residue, valuation)
        if isinstance(residue, Fraction):
            lines.append((Fraction(0), residue))
        for xa in clause.xatoms:
            rest = evaluate(xa.rest, valuation)
            if not xa.has_test and isinstance(rest, Fraction) and xa.coeff:
                lines.append((xa.coeff, rest))
    return lines


def diagonal_candidates(dec: ClauseDecomposition, valuation: Valuation) -> list[Fraction]:
    """Candidate crossing abscissae: per-line diagonal crossings plus all
    pairwise line intersections."""
    lines = _finite_lines(dec, valuation)
    out: set[Fraction] = set()
    for c, f in lines:
        if c != 1:
            out.add(f / (1 - c))
    for i in range(len(lines)):
        c1, f1 = lines[i]
        for c2, f2 in lines[i + 1 :]:
            if c1 != c2:
                out.add((f2 - f1) / (c1 - c2))
    return sorted(out)


def piecewise_function(dec: ClauseDecomposition, valuation: Valuation):
    """The instantiated clause form as an exact callable of one variable."""
    is_cnf = dec.polarity == CNF
    clauses = []
    for clause in dec.clauses:
        residue = evaluate(clause.residue, valuation)
        atoms = [(xa.coeff, evaluate(xa.rest, valuation), xa.has_test) for xa in clause.xatoms]
        clauses.append((atoms, residue))

    def g(x: ExtReal) -> ExtReal:
        outer = INF if is_cnf else NEG_INF
        for atoms, residue in clauses:
            inner = residue
            for coeff, rest, has_test in atoms:
                v = rest
                if coeff:
                    v = extreal.add(v, extreal.scale(coeff, x))
                if has_test:
                    v = extreal.add(v, extreal.eq_neg_inf(x))
                inner = extreal.maximum(inner, v) if is_cnf else extreal.minimum(inner, v)
            outer = extreal.minimum(outer, inner) if is_cnf else extreal.maximum(outer, inner)
        return outer

    return g


def univariate_fixed_point(op: FixOp, dec: ClauseDecomposition, valuation: Valuation) -> ExtReal:
    """Extremal fixpoint of x -> g(x) where g is the decomposed clause form
    with all other variables instantiated by the valuation."""
    g = piecewise_function(dec, valuation)
    fixed: list[ExtReal] = [x for x in diagonal_candidates(dec, valuation) if g(x) == x]
    if g(NEG_INF) == NEG_INF:
        fixed.append(NEG_INF)
    if g(INF) == INF:
        fixed.append(INF)
    if not fixed:
        raise AssertionError("monotone function without a fixpoint")
    key = extreal.sort_key
    return min(fixed, key=key) if op is FixOp.MU else max(fixed, key=key)


SAMPLE_POOL: tuple[ExtReal, ...] = (
    NEG_INF,
    Fraction(-2),
    Fraction(0),
    Fraction(1, 2),
    Fraction(1),
    Fraction(3),
    INF,
)


@dataclass
class Disagreement:
    valuation: dict[str, ExtReal]
    solver_value: ExtReal
    oracle_value: ExtReal


@dataclass
class CrosscheckReport:
    trials: int
    disagreements: list[Disagreement] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _instantiated_value(
    op: FixOp, var: str, rhs: Expr, env: Mapping[str, ExtReal], normalizer: Normalizer
) -> Optional[ExtReal]:
    """Oracle value of the equation with all other variables fixed, or None
    when the instantiated rhs does not flatten to a single clause form."""
    inst = rhs
    for name, value in env.items():
        inst = substitute(inst, name, Const(value))
    polarity = CNF if op is FixOp.MU else DNF
    tree = normalizer.simplify_nf(normalizer.to_nf(inst, polarity))
    if not isinstance(tree, Leaf):
        return None
    return univariate_fixed_point(op, expose(var, tree.simple), Valuation())


def crosscheck_single(
    op: FixOp,
    var: str,
    rhs: Expr,
    trials: int,
    rng: Optional[random.Random] = None,
    normalizer: Optional[Normalizer] = None,
) -> CrosscheckReport:
    """Compare the symbolic solution against the geometric oracle on random
    instantiations of the other variables.

    Instantiations whose normal form keeps a conditional node fall back to
    an exact fixpoint residual instead of the extremal-value comparison.
    """
    rng = rng or random.Random(0)
    n = normalizer or Normalizer()
    solved = solve_single(op, var, rhs, n)
    others = sorted(occ(rhs) - {var})
    report = CrosscheckReport(trials)
    for _ in range(trials):
        env = {name: rng.choice(SAMPLE_POOL) for name in others}
        solver_value = evaluate(solved, Valuation(env))
        oracle_value = _instantiated_value(op, var, rhs, env, n)
        if oracle_value is None:
            back = evaluate(rhs, Valuation(env).updated(var, solver_value))
            if back != solver_value:
                report.disagreements.append(Disagreement(dict(env), solver_value, back))
            continue
        if solver_value != oracle_value:
            env = _minimize(op, var, rhs, solved, env, n)
            solver_value = evaluate(solved, Valuation(env))
            oracle_value = _instantiated_value(op, var, rhs, env, n)
            report.disagreements.append(Disagreement(dict(env), solver_value, oracle_value))
    return report


def _minimize(op, var, rhs, solved, env, normalizer):
    """Greedily push a disagreeing valuation toward simpler constants."""

    def disagrees(candidate):
        o = _instantiated_value(op, var, rhs, candidate, normalizer)
        return o is not None and evaluate(solved, Valuation(candidate)) != o

    current = dict(env)
    for name in sorted(current):
        for simpler in (Fraction(0), Fraction(1), NEG_INF, INF):
            trial = dict(current)
            trial[name] = simpler
            if disagrees(trial):
                current = trial
                break
    return current
