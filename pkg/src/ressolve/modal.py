"""Quantitative modal formulas over probabilistic transition systems and
their translation into equation systems.

Each fixpoint binder contributes one equation per model state, in declared
state order, blocks in syntactic formula order.  Modalities take the join
(diamond) or meet (box) over the probability-weighted successor sums of
the matching transitions; missing transitions yield the empty join/meet.
The generated system is prefixed with a least-fixpoint equation for the
reserved variable X_init holding the initial-distribution average.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import DuplicateBinder, UnboundVariable, UnknownState
from .expr import Add, Const, Expr, Max, Min, Scale, Var
from .extreal import INF, NEG_INF, ExtReal
from .nf import Normalizer
from .res import RES, Equation, gauss_solve
from .solver import FixOp

INIT_VAR = "X_init"


@dataclass(frozen=True)
class FVar:
    name: str


@dataclass(frozen=True)
class FConst:
    value: ExtReal


@dataclass(frozen=True)
class FScale:
    coeff: Fraction
    arg: "Formula"


@dataclass(frozen=True)
class FAdd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FOr:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    action: str
    arg: "Formula"


@dataclass(frozen=True)
class Box:
    action: str
    arg: "Formula"


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "Formula"


Formula = Union[FVar, FConst, FScale, FAdd, FOr, FAnd, Diamond, Box, Mu, Nu]

Distribution = tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class Transition:
    source: str
    action: str
    dist: Distribution


@dataclass(frozen=True)
class PLTS:
    states: tuple[str, ...]
    actions: tuple[str, ...]
    transitions: tuple[Transition, ...]
    init: Distribution

    def __post_init__(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ValueError("duplicate state names")
        for dist in [self.init] + [t.dist for t in self.transitions]:
            total = Fraction(0)
            for state, prob in dist:
                if state not in known:
                    raise UnknownState(f"distribution targets unknown state {state}")
                if prob <= 0:
                    raise ValueError(f"probabilities must be positive, got {prob} for {state}")
                total += prob
            if total != 1:
                raise ValueError(f"probabilities must sum to 1, got {total}")
        for t in self.transitions:
            if t.source not in known:
                raise UnknownState(f"transition from unknown state {t.source}")

    def state_index(self, state: str) -> int:
        return self.states.index(state)


@dataclass(frozen=True)
class Diagnostic:
    level: str  # error | warning
    message: str


def check_formula(formula: Formula, model: Optional[PLTS] = None) -> list[Diagnostic]:
    """Closedness, duplicate binders, and action-alphabet warnings."""
    out: list[Diagnostic] = []
    seen_binders: set[str] = set()

    def walk(f: Formula, bound: frozenset[str]):
        match f:
            case FVar(name):
                if name not in bound:
                    out.append(Diagnostic("error", f"unbound variable {name}"))
            case FConst(_):
                pass
            case FScale(_, arg) | Diamond(_, arg) | Box(_, arg):
                if isinstance(f, (Diamond, Box)) and model is not None and f.action not in model.actions:
                    shape = "diamond" if isinstance(f, Diamond) else "box"
                    empty = "-inf" if isinstance(f, Diamond) else "inf"
                    out.append(
                        Diagnostic(
                            "warning",
                            f"action {f.action} missing from the model: {shape} evaluates to {empty}",
                        )
                    )
                walk(arg, bound)
            case FAdd(left, right) | FOr(left, right) | FAnd(left, right):
                walk(left, bound)
                walk(right, bound)
            case Mu(var, body) | Nu(var, body):
                if var in seen_binders:
                    out.append(Diagnostic("error", f"variable {var} is bound twice"))
                seen_binders.add(var)
                walk(body, bound | {var})
            case _:
                raise TypeError(f"not a formula: {f!r}")

    walk(formula, frozenset())
    return out


def _state_var(binder: str, state: str) -> str:
    return f"{binder}.{state}"


def _weighted_sum(model: PLTS, dist: Distribution, term) -> Expr:
    entries = sorted(dist, key=lambda item: model.state_index(item[0]))
    parts = [term(s) if p == 1 else Scale(p, term(s)) for s, p in entries]
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Add(p, out)
    return out


def _rhs(model: PLTS, state: str, formula: Formula) -> Expr:
    match formula:
        case FVar(name):
            return Var(_state_var(name, state))
        case FConst(value):
            return Const(value)
        case FScale(coeff, arg):
            return Scale(coeff, _rhs(model, state, arg))
        case FAdd(left, right):
            return Add(_rhs(model, state, left), _rhs(model, state, right))
        case FOr(left, right):
            return Max(_rhs(model, state, left), _rhs(model, state, right))
        case FAnd(left, right):
            return Min(_rhs(model, state, left), _rhs(model, state, right))
        case Diamond(action, arg) | Box(action, arg):
            dists = []
            for t in model.transitions:
                if t.source == state and t.action == action:
                    canon = tuple(sorted(t.dist, key=lambda item: model.state_index(item[0])))
                    if canon not in dists:
                        dists.append(canon)
            is_diamond = isinstance(formula, Diamond)
            if not dists:
                return Const(NEG_INF) if is_diamond else Const(INF)
            parts = [_weighted_sum(model, d, lambda s: _rhs(model, s, arg)) for d in dists]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Max(p, out) if is_diamond else Min(p, out)
            return out
        case Mu(var, _) | Nu(var, _):
            return Var(_state_var(var, state))
    raise TypeError(f"not a formula: {formula!r}")


def _equations(model: PLTS, formula: Formula) -> list[Equation]:
    match formula:
        case FVar(_) | FConst(_):
            return []
        case FScale(_, arg) | Diamond(_, arg) | Box(_, arg):
            return _equations(model, arg)
        case FAdd(left, right) | FOr(left, right) | FAnd(left, right):
            return _equations(model, left) + _equations(model, right)
        case Mu(var, body) | Nu(var, body):
            op = FixOp.MU if isinstance(formula, Mu) else FixOp.NU
            block = [Equation(op, _state_var(var, s), _rhs(model, s, body)) for s in model.states]
            return block + _equations(model, body)
    raise TypeError(f"not a formula: {formula!r}")


def translate(formula: Formula, model: PLTS) -> RES:
    """Equation system whose X_init value is the formula's value on the model."""
    diagnostics = check_formula(formula, model)
    for d in diagnostics:
        if d.level == "error":
            if "bound twice" in d.message:
                raise DuplicateBinder(d.message)
            raise UnboundVariable(d.message)
    init_rhs = _weighted_sum(model, model.init, lambda s: _rhs(model, s, formula))
    equations = [Equation(FixOp.MU, INIT_VAR, init_rhs)] + _equations(model, formula)
    names = [eq.var for eq in equations]
    if len(set(names)) != len(names):
        raise ValueError("generated state-indexed variable names collide")
    return RES(tuple(equations))


def evaluate_formula(formula: Formula, model: PLTS, normalizer: Optional[Normalizer] = None) -> ExtReal:
    """Translate, solve, and read off the initial variable."""
    system = translate(formula, model)
    return gauss_solve(system, normalizer=normalizer)[INIT_VAR]
