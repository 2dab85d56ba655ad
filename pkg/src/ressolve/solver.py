"""Closed-form solving of a single fixpoint equation.

`solve_single` eliminates the bound variable from its own right-hand side:
the rhs is brought to clause normal form (CNF for least, DNF for greatest
fixpoints), each clause is solved by the line-crossing construction, and
conditional nodes are handled by the four recursive cases with the guard
substituted accordingly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import NegationPresent
from .expr import Add, Cond, CondA, Const, EqInf, EqNegInf, Expr, Max, Min, Scale, occ, substitute
from .extreal import INF, NEG_INF, ZERO
from .nf import (
    CNF,
    COND,
    DNF,
    Atom,
    Leaf,
    NF,
    Normalizer,
    SimpleNF,
    simplify_expr,
)


class FixOp(enum.Enum):
    MU = "mu"
    NU = "nu"


@dataclass(frozen=True)
class XAtom:
    """One atom of a clause that mentions the solved variable."""

    coeff: Fraction  # 0 when the variable occurs only under the -inf test
    has_test: bool
    rest: Expr  # remainder of the atom, free of the solved variable


@dataclass(frozen=True)
class ClauseDec:
    xatoms: tuple[XAtom, ...]
    residue: Expr  # fold of the atoms not mentioning the variable


@dataclass(frozen=True)
class ClauseDecomposition:
    polarity: str
    clauses: tuple[ClauseDec, ...]


def _fold(cls, terms: list[Expr], empty: Expr) -> Expr:
    if not terms:
        return empty
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = cls(t, out)
    return out


def expose(var: str, simple: SimpleNF) -> ClauseDecomposition:
    """Split every clause into variable-bearing atoms and the variable-free
    residue (join of the rest in CNF, meet in DNF)."""
    residue_empty = Const(NEG_INF) if simple.polarity == CNF else Const(INF)
    residue_cls = Max if simple.polarity == CNF else Min
    clauses = []
    for clause in simple.clauses:
        xatoms = []
        rest_atoms = []
        for a in clause:
            coeff = dict(a.coeffs).get(var)
            has_test = var in a.tests
            if coeff is None and not has_test:
                rest_atoms.append(a)
                continue
            remainder = Atom(
                tuple(item for item in a.coeffs if item[0] != var),
                a.tests - {var},
                a.const,
            )
            xatoms.append(XAtom(coeff or Fraction(0), has_test, remainder.to_expr()))
        residue = _fold(residue_cls, [a.to_expr() for a in rest_atoms], residue_empty)
        clauses.append(ClauseDec(tuple(xatoms), residue))
    return ClauseDecomposition(simple.polarity, tuple(clauses))


def _shifted(xa: XAtom, u: Expr) -> Expr:
    """The diagonal-excess term of a steep line: rest + (coeff-1)·U, where the
    coefficient-one case contributes the constant zero."""
    if xa.coeff == 1:
        return xa.rest
    return Add(xa.rest, Scale(xa.coeff - 1, u))


def sol_mu_simple(dec: ClauseDecomposition) -> Expr:
    """Least-fixpoint solution of a conjunctive clause decomposition."""
    parts = []
    for clause in dec.clauses:
        m = clause.residue
        f_all = _fold(Max, [xa.rest for xa in clause.xatoms], Const(NEG_INF))
        u = _fold(
            Max,
            [m]
            + [
                xa.rest if xa.coeff == 0 else Scale(1 / (1 - xa.coeff), xa.rest)
                for xa in clause.xatoms
                if xa.coeff < 1
            ],
            Const(NEG_INF),
        )
        steep = [_shifted(xa, u) for xa in clause.xatoms if xa.coeff >= 1]
        if any(xa.has_test for xa in clause.xatoms):
            steep.append(Const(INF))
        guard = _fold(Max, steep, Const(NEG_INF))
        inner = Cond(guard, u, Const(INF))
        mid = Cond(EqNegInf(m), Const(NEG_INF), inner)
        parts.append(Cond(EqInf(f_all), mid, Const(INF)))
    return _fold(Min, parts, Const(INF))


def sol_nu_simple(dec: ClauseDecomposition) -> Expr:
    """Greatest-fixpoint solution of a disjunctive clause decomposition."""
    parts = []
    for clause in dec.clauses:
        m = clause.residue
        u = _fold(
            Min,
            [m]
            + [
                Scale(1 / (1 - xa.coeff), xa.rest)
                for xa in clause.xatoms
                if xa.coeff < 1 and not xa.has_test
            ],
            Const(INF),
        )
        steep = [_shifted(xa, u) for xa in clause.xatoms if xa.coeff >= 1 and not xa.has_test]
        guard = _fold(Min, steep, Const(INF))
        inner = CondA(guard, Const(NEG_INF), u)
        parts.append(Cond(EqInf(m), inner, Const(INF)))
    return _fold(Max, parts, Const(NEG_INF))


def _solve_tree(op: FixOp, var: str, tree: NF, n: Normalizer) -> Expr:
    if isinstance(tree, Leaf):
        dec = expose(var, tree.simple)
        raw = sol_mu_simple(dec) if op is FixOp.MU else sol_nu_simple(dec)
        return simplify_expr(raw)
    guard = tree.guard.to_expr()
    if tree.kind == COND:
        if op is FixOp.MU:
            sol_low = _solve_tree(op, var, tree.low, n)
            sol_high = _solve_tree(op, var, tree.high, n)
            g = substitute(guard, var, simplify_expr(Min(sol_low, sol_high)))
            return simplify_expr(Cond(g, sol_low, sol_high))
        sol_high = _solve_tree(op, var, tree.high, n)
        sol_both = _solve_tree(op, var, n.t_meet(tree.low, tree.high), n)
        g = substitute(guard, var, sol_high)
        return simplify_expr(Cond(g, sol_both, sol_high))
    if op is FixOp.MU:
        sol_low = _solve_tree(op, var, tree.low, n)
        sol_both = _solve_tree(op, var, n.t_join(tree.low, tree.high), n)
        g = substitute(guard, var, sol_low)
        return simplify_expr(CondA(g, sol_low, sol_both))
    sol_low = _solve_tree(op, var, tree.low, n)
    sol_high = _solve_tree(op, var, tree.high, n)
    g = substitute(guard, var, simplify_expr(Max(sol_low, sol_high)))
    return simplify_expr(CondA(g, sol_low, sol_high))


def solve_single(op: FixOp, var: str, rhs: Expr, normalizer: Optional[Normalizer] = None) -> Expr:
    """Replace `op var = rhs` by an equivalent right-hand side without `var`."""
    n = normalizer or Normalizer()
    polarity = CNF if op is FixOp.MU else DNF
    tree = n.simplify_nf(n.to_nf(rhs, polarity))
    out = simplify_expr(_solve_tree(op, var, tree, n))
    if var in occ(out):
        raise AssertionError(f"variable {var} survived its own elimination: {out!r}")
    return out
