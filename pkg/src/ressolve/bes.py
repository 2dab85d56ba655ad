"""Boolean equation systems: a direct Gauss-style solver and the two
embeddings into extended-real systems used for differential testing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import BadConstants, NotClosed
from .expr import Const, Max, Min, Var
from .extreal import INF, NEG_INF, ExtReal
from .res import RES, Equation
from .solver import FixOp


@dataclass(frozen=True)
class BVar:
    name: str


@dataclass(frozen=True)
class BConst:
    value: bool


@dataclass(frozen=True)
class BOr:
    left: "BoolExpr"
    right: "BoolExpr"


@dataclass(frozen=True)
class BAnd:
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Union[BVar, BConst, BOr, BAnd]

TRUE = BConst(True)
FALSE = BConst(False)


@dataclass(frozen=True)
class BesEquation:
    op: FixOp
    var: str
    rhs: BoolExpr


@dataclass(frozen=True)
class BES:
    equations: tuple[BesEquation, ...] = ()

    def __post_init__(self):
        seen = set()
        for eq in self.equations:
            if eq.var in seen:
                raise ValueError(f"duplicate left-hand side variable {eq.var}")
            seen.add(eq.var)

    def __iter__(self) -> Iterator[BesEquation]:
        return iter(self.equations)

    def __len__(self) -> int:
        return len(self.equations)

    def bnd(self) -> frozenset[str]:
        return frozenset(eq.var for eq in self.equations)

    def is_closed(self) -> bool:
        bound = self.bnd()
        return all(bool_occ(eq.rhs) <= bound for eq in self.equations)


def bool_occ(e: BoolExpr) -> frozenset[str]:
    match e:
        case BVar(name):
            return frozenset((name,))
        case BConst(_):
            return frozenset()
        case BOr(left, right) | BAnd(left, right):
            return bool_occ(left) | bool_occ(right)
    raise TypeError(f"not a boolean expression: {e!r}")


def bool_substitute(e: BoolExpr, name: str, value: BoolExpr) -> BoolExpr:
    match e:
        case BVar(n):
            return value if n == name else e
        case BConst(_):
            return e
        case BOr(left, right):
            return BOr(bool_substitute(left, name, value), bool_substitute(right, name, value))
        case BAnd(left, right):
            return BAnd(bool_substitute(left, name, value), bool_substitute(right, name, value))
    raise TypeError(f"not a boolean expression: {e!r}")


def bool_simplify(e: BoolExpr) -> BoolExpr:
    match e:
        case BVar(_) | BConst(_):
            return e
        case BOr(left, right):
            a, b = bool_simplify(left), bool_simplify(right)
            if a == TRUE or b == TRUE:
                return TRUE
            if a == FALSE:
                return b
            if b == FALSE:
                return a
            return a if a == b else BOr(a, b)
        case BAnd(left, right):
            a, b = bool_simplify(left), bool_simplify(right)
            if a == FALSE or b == FALSE:
                return FALSE
            if a == TRUE:
                return b
            if b == TRUE:
                return a
            return a if a == b else BAnd(a, b)
    raise TypeError(f"not a boolean expression: {e!r}")


def bool_evaluate(e: BoolExpr, env: dict[str, bool]) -> bool:
    match e:
        case BVar(name):
            return env[name]
        case BConst(value):
            return value
        case BOr(left, right):
            return bool_evaluate(left, env) or bool_evaluate(right, env)
        case BAnd(left, right):
            return bool_evaluate(left, env) and bool_evaluate(right, env)
    raise TypeError(f"not a boolean expression: {e!r}")


def _to_expr(e: BoolExpr):
    match e:
        case BVar(name):
            return Var(name)
        case BConst(value):
            return Const(INF) if value else Const(NEG_INF)
        case BOr(left, right):
            return Max(_to_expr(left), _to_expr(right))
        case BAnd(left, right):
            return Min(_to_expr(left), _to_expr(right))
    raise TypeError(f"not a boolean expression: {e!r}")


def embed_literal(system: BES) -> RES:
    """true becomes +inf, false -inf, join/meet stay as they are."""
    return RES(tuple(Equation(eq.op, eq.var, _to_expr(eq.rhs)) for eq in system))


def embed_const(system: BES, c_true: ExtReal, c_false: ExtReal) -> RES:
    """Clamp every right-hand side into [c_false, c_true]."""
    if not c_true > c_false:
        raise BadConstants(f"need c_true > c_false, got {c_true} <= {c_false}")
    return RES(
        tuple(
            Equation(eq.op, eq.var, Max(Const(c_false), Min(Const(c_true), _to_expr(eq.rhs))))
            for eq in system
        )
    )


def solve_bes_direct(system: BES) -> dict[str, bool]:
    """Classical boolean elimination: in a least fixpoint the variable's own
    occurrences may be read as false, in a greatest one as true."""
    if not system.is_closed():
        raise NotClosed("boolean system is not closed")
    eqs = list(system.equations)
    for k in range(len(eqs) - 1, -1, -1):
        eq = eqs[k]
        self_value = FALSE if eq.op is FixOp.MU else TRUE
        solved = bool_simplify(bool_substitute(eq.rhs, eq.var, self_value))
        eqs[k] = BesEquation(eq.op, eq.var, solved)
        for i in range(k):
            eqs[i] = BesEquation(
                eqs[i].op,
                eqs[i].var,
                bool_simplify(bool_substitute(eqs[i].rhs, eq.var, solved)),
            )
    values: dict[str, bool] = {}
    for eq in eqs:
        values[eq.var] = bool_evaluate(eq.rhs, values)
    return values
