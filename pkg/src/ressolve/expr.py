"""Expression trees over the extended reals: evaluation, substitution,
variable analysis and negation elimination.

Negation (`Neg`) is an input-surface convenience only: parsers may produce
it, `eliminate_negation` removes it, and every other operation rejects it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Union

from . import extreal
from .errors import NegationPresent, OddNegation
from .extreal import ExtReal, INF, NEG_INF


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: ExtReal


@dataclass(frozen=True)
class Scale:
    coeff: Fraction
    arg: "Expr"

    def __post_init__(self):
        if not (isinstance(self.coeff, Fraction) and self.coeff > 0):
            raise ValueError(f"scale coefficient must be a positive rational, got {self.coeff!r}")


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Min:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Max:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Cond:
    """Value is low∧high when guard ≤ 0, else high."""

    guard: "Expr"
    low: "Expr"
    high: "Expr"


@dataclass(frozen=True)
class CondA:
    """Value is low when guard < 0, else low∨high."""

    guard: "Expr"
    low: "Expr"
    high: "Expr"


@dataclass(frozen=True)
class EqInf:
    arg: "Expr"


@dataclass(frozen=True)
class EqNegInf:
    arg: "Expr"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


Expr = Union[Var, Const, Scale, Add, Min, Max, Cond, CondA, EqInf, EqNegInf, Neg]

TOP = Const(INF)
BOTTOM = Const(NEG_INF)


def const(value) -> Const:
    if isinstance(value, (int, str)):
        value = Fraction(value)
    return Const(value)


class Valuation:
    """Total map from variable names to extended reals.

    Unmapped variables resolve to `default` (-inf unless configured), so a
    valuation is usable on any expression without bookkeeping.
    """

    __slots__ = ("_values", "default")

    def __init__(self, values: Optional[Mapping[str, ExtReal]] = None, default: ExtReal = NEG_INF):
        self._values = dict(values) if values else {}
        self.default = default

    def __getitem__(self, name: str) -> ExtReal:
        return self._values.get(name, self.default)

    def updated(self, name: str, value: ExtReal) -> "Valuation":
        out = Valuation(self._values, self.default)
        out._values[name] = value
        return out

    def items(self):
        return self._values.items()

    def __repr__(self):
        body = ", ".join(f"{k}={extreal.format_value(v)}" for k, v in sorted(self._values.items()))
        return f"Valuation({{{body}}}, default={extreal.format_value(self.default)})"


def evaluate(e: Expr, valuation: Valuation) -> ExtReal:
    """Structural fold of a negation-free expression under a valuation."""
    match e:
        case Var(name):
            return valuation[name]
        case Const(value):
            return value
        case Scale(coeff, arg):
            return extreal.scale(coeff, evaluate(arg, valuation))
        case Add(left, right):
            return extreal.add(evaluate(left, valuation), evaluate(right, valuation))
        case Min(left, right):
            return extreal.minimum(evaluate(left, valuation), evaluate(right, valuation))
        case Max(left, right):
            return extreal.maximum(evaluate(left, valuation), evaluate(right, valuation))
        case Cond(guard, low, high):
            return extreal.cond(evaluate(guard, valuation), evaluate(low, valuation), evaluate(high, valuation))
        case CondA(guard, low, high):
            return extreal.conda(evaluate(guard, valuation), evaluate(low, valuation), evaluate(high, valuation))
        case EqInf(arg):
            return extreal.eq_inf(evaluate(arg, valuation))
        case EqNegInf(arg):
            return extreal.eq_neg_inf(evaluate(arg, valuation))
        case Neg(_):
            raise NegationPresent("cannot evaluate an expression containing negation")
    raise TypeError(f"not an expression: {e!r}")


def children(e: Expr) -> Iterator[Expr]:
    match e:
        case Var(_) | Const(_):
            return
        case Scale(_, arg) | EqInf(arg) | EqNegInf(arg) | Neg(arg):
            yield arg
        case Add(left, right) | Min(left, right) | Max(left, right):
            yield left
            yield right
        case Cond(guard, low, high) | CondA(guard, low, high):
            yield guard
            yield low
            yield high


def occ(e: Expr) -> frozenset[str]:
    """The set of variable names occurring in the expression."""
    out: set[str] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        else:
            stack.extend(children(node))
    return frozenset(out)


def substitute(e: Expr, name: str, replacement: Expr) -> Expr:
    """Plain syntactic substitution (expressions have no binders)."""
    match e:
        case Var(n):
            return replacement if n == name else e
        case Const(_):
            return e
        case Scale(coeff, arg):
            return Scale(coeff, substitute(arg, name, replacement))
        case Add(left, right):
            return Add(substitute(left, name, replacement), substitute(right, name, replacement))
        case Min(left, right):
            return Min(substitute(left, name, replacement), substitute(right, name, replacement))
        case Max(left, right):
            return Max(substitute(left, name, replacement), substitute(right, name, replacement))
        case Cond(guard, low, high):
            return Cond(
                substitute(guard, name, replacement),
                substitute(low, name, replacement),
                substitute(high, name, replacement),
            )
        case CondA(guard, low, high):
            return CondA(
                substitute(guard, name, replacement),
                substitute(low, name, replacement),
                substitute(high, name, replacement),
            )
        case EqInf(arg):
            return EqInf(substitute(arg, name, replacement))
        case EqNegInf(arg):
            return EqNegInf(substitute(arg, name, replacement))
        case Neg(arg):
            return Neg(substitute(arg, name, replacement))
    raise TypeError(f"not an expression: {e!r}")


def eliminate_negation(e: Expr) -> Expr:
    """Remove all Neg nodes, provided every variable sits under an even
    number of them.

    Negated constants fold.  A negated sum expands into the conditional
    form of the minus-infinity-dominant addition applied to the negated
    operands, since that addition is not a primary node.
    """
    return _elim(e, False)


def _elim(e: Expr, flip: bool) -> Expr:
    match e:
        case Var(name):
            if flip:
                raise OddNegation(f"variable {name} occurs under an odd number of negations")
            return e
        case Const(value):
            return Const(extreal.negate(value)) if flip else e
        case Scale(coeff, arg):
            return Scale(coeff, _elim(arg, flip))
        case Add(left, right):
            a = _elim(left, flip)
            b = _elim(right, flip)
            if not flip:
                return Add(a, b)
            # -(x + y) = (-x) +̂ (-y), expanded by the defining conditional.
            return Cond(EqNegInf(a), BOTTOM, Cond(EqNegInf(b), BOTTOM, Add(a, b)))
        case Min(left, right):
            a = _elim(left, flip)
            b = _elim(right, flip)
            return Max(a, b) if flip else Min(a, b)
        case Max(left, right):
            a = _elim(left, flip)
            b = _elim(right, flip)
            return Min(a, b) if flip else Max(a, b)
        case Cond(guard, low, high):
            if flip:
                return CondA(_elim(guard, True), _elim(high, True), _elim(low, True))
            return Cond(_elim(guard, False), _elim(low, False), _elim(high, False))
        case CondA(guard, low, high):
            if flip:
                return Cond(_elim(guard, True), _elim(high, True), _elim(low, True))
            return CondA(_elim(guard, False), _elim(low, False), _elim(high, False))
        case EqInf(arg):
            return EqNegInf(_elim(arg, True)) if flip else EqInf(_elim(arg, False))
        case EqNegInf(arg):
            return EqInf(_elim(arg, True)) if flip else EqNegInf(_elim(arg, False))
        case Neg(arg):
            return _elim(arg, not flip)
    raise TypeError(f"not an expression: {e!r}")


def size(e: Expr) -> int:
    total = 0
    stack = [e]
    while stack:
        node = stack.pop()
        total += 1
        stack.extend(children(node))
    return total
