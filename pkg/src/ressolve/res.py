"""Equation systems over the extended reals and their elimination-based solver.

A system is an ordered sequence of least/greatest fixpoint equations; order
is semantically significant between blocks of different fixpoint signs.
`gauss_solve` runs the standard two-pass elimination: solve each equation
for its own variable from the last upwards, substituting the solved form
into earlier equations, then propagate the resulting constants downwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import IndexOrder, NotClosed
from .expr import Const, Expr, Valuation, evaluate, occ, substitute
from .extreal import ExtReal
from .nf import Normalizer, simplify_expr
from .solver import FixOp, solve_single


@dataclass(frozen=True)
class Equation:
    op: FixOp
    var: str
    rhs: Expr


@dataclass(frozen=True)
class RES:
    equations: tuple[Equation, ...] = ()

    def __post_init__(self):
        seen = set()
        for eq in self.equations:
            if eq.var in seen:
                raise ValueError(f"duplicate left-hand side variable {eq.var}")
            seen.add(eq.var)

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self) -> Iterator[Equation]:
        return iter(self.equations)

    def bnd(self) -> frozenset[str]:
        return frozenset(eq.var for eq in self.equations)

    def free(self) -> frozenset[str]:
        bound = self.bnd()
        out: set[str] = set()
        for eq in self.equations:
            out |= occ(eq.rhs) - bound
        return frozenset(out)

    def is_closed(self) -> bool:
        return not self.free()


@dataclass(frozen=True)
class TraceStep:
    rule: str  # solve | E3 | E4
    before: Optional[Equation]
    after: Optional[Equation]


def substitute_later_into_earlier(system: RES, i: int, j: int) -> RES:
    """Replace equation j's variable by its rhs inside equation i's rhs.

    Sound for any i < j because the equations strictly between them cannot
    bind either variable (left-hand sides are pairwise distinct).
    """
    if not 0 <= i < j < len(system.equations):
        raise IndexOrder(f"need 0 <= i < j < {len(system.equations)}, got i={i}, j={j}")
    eqs = list(system.equations)
    src = eqs[j]
    tgt = eqs[i]
    eqs[i] = Equation(tgt.op, tgt.var, substitute(tgt.rhs, src.var, src.rhs))
    return RES(tuple(eqs))


SolveHook = Callable[[FixOp, str, Expr, Expr], None]


def eliminate(system: RES, normalizer: Optional[Normalizer] = None) -> RES:
    """Backward pass only: afterwards equation k's rhs mentions no bound
    variable of index >= k.  Usable on open systems."""
    n = normalizer or Normalizer()
    eqs = list(system.equations)
    for k in range(len(eqs) - 1, -1, -1):
        solved = solve_single(eqs[k].op, eqs[k].var, eqs[k].rhs, n)
        eqs[k] = Equation(eqs[k].op, eqs[k].var, solved)
        for i in range(k):
            if eqs[k].var in occ(eqs[i].rhs):
                eqs[i] = Equation(
                    eqs[i].op,
                    eqs[i].var,
                    simplify_expr(substitute(eqs[i].rhs, eqs[k].var, solved)),
                )
    return RES(tuple(eqs))


def gauss_solve(
    system: RES,
    normalizer: Optional[Normalizer] = None,
    trace_log: Optional[list[TraceStep]] = None,
    on_solve: Optional[SolveHook] = None,
) -> dict[str, ExtReal]:
    """Solve a closed system exactly; returns a value for every bound variable."""
    if not system.is_closed():
        missing = ", ".join(sorted(system.free()))
        raise NotClosed(f"unbound variables in right-hand sides: {missing}")
    n = normalizer or Normalizer()
    eqs = list(system.equations)

    for k in range(len(eqs) - 1, -1, -1):
        before = eqs[k]
        solved = solve_single(before.op, before.var, before.rhs, n)
        if on_solve is not None:
            on_solve(before.op, before.var, before.rhs, solved)
        eqs[k] = Equation(before.op, before.var, solved)
        if trace_log is not None:
            trace_log.append(TraceStep("solve", before, eqs[k]))
        for i in range(k):
            if before.var in occ(eqs[i].rhs):
                prev = eqs[i]
                eqs[i] = Equation(prev.op, prev.var, simplify_expr(substitute(prev.rhs, before.var, solved)))
                if trace_log is not None:
                    trace_log.append(TraceStep("E3", prev, eqs[i]))

    values: dict[str, ExtReal] = {}
    for k, eq in enumerate(eqs):
        value = evaluate(eq.rhs, Valuation(values))
        values[eq.var] = value
        if trace_log is not None:
            later = [i for i in range(k + 1, len(eqs)) if eq.var in occ(eqs[i].rhs)]
            if later:
                resolved = Equation(eq.op, eq.var, Const(value))
                trace_log.append(TraceStep("E4", resolved, resolved))
                for i in later:
                    prev = eqs[i]
                    eqs[i] = Equation(
                        prev.op, prev.var, simplify_expr(substitute(prev.rhs, eq.var, Const(value)))
                    )
                    trace_log.append(TraceStep("E3", prev, eqs[i]))
    return values


def trace(system: RES, normalizer: Optional[Normalizer] = None) -> list[TraceStep]:
    """Derivation log of a full solve."""
    log: list[TraceStep] = []
    gauss_solve(system, normalizer=normalizer, trace_log=log)
    return log
