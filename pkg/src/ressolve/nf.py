"""Normal forms and semantics-preserving simplification.

A *simple* normal form is a two-level clause matrix over linear atoms
(`sum of positive-coefficient variables + minus-infinity tests + constant`):
CNF is a meet of joins, DNF a join of meets.  A full normal form is a tree
of conditional nodes whose guards are simple and whose leaves are simple.

Conventions for empty structures: an empty CNF clause list means +inf and
an empty clause inside it means -inf; dually for DNF.  All rewriting is
guarded by a configurable atom-count cap that raises `TermBlowup` instead
of exhausting memory.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from . import extreal
from .errors import ConditionalPresent, NegationPresent, NotConditional, TermBlowup
from .expr import (
    Add,
    Cond,
    CondA,
    Const,
    EqInf,
    EqNegInf,
    Expr,
    Max,
    Min,
    Neg,
    Scale,
    Valuation,
    Var,
)
from .extreal import INF, NEG_INF, ZERO, ExtReal

CNF = "cnf"
DNF = "dnf"

COND = "cond"
CONDA = "conda"

DEFAULT_MAX_ATOMS = 10**6


@dataclass(frozen=True)
class Atom:
    """One linear atom: coeffs are strictly positive, tests contribute a
    minus-infinity check per variable, and the constant may be infinite."""

    coeffs: tuple[tuple[str, Fraction], ...] = ()
    tests: frozenset = frozenset()
    const: ExtReal = ZERO

    def is_const(self) -> bool:
        return not self.coeffs and not self.tests

    def variables(self) -> frozenset:
        return frozenset(x for x, _ in self.coeffs) | self.tests

    def evaluate(self, valuation: Valuation) -> ExtReal:
        total = self.const
        for x, c in self.coeffs:
            total = extreal.add(total, extreal.scale(c, valuation[x]))
        for y in self.tests:
            total = extreal.add(total, extreal.eq_neg_inf(valuation[y]))
        return total

    def to_expr(self) -> Expr:
        terms: list[Expr] = []
        for x, c in self.coeffs:
            terms.append(Var(x) if c == 1 else Scale(c, Var(x)))
        for y in sorted(self.tests):
            terms.append(EqNegInf(Var(y)))
        if self.const != ZERO or not terms:
            terms.append(Const(self.const))
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out = Add(t, out)
        return out

    def sort_key(self):
        return (
            tuple(x for x, _ in self.coeffs),
            tuple(c for _, c in self.coeffs),
            tuple(sorted(self.tests)),
            extreal.sort_key(self.const),
        )


def atom(coeffs=None, tests=(), const: ExtReal = ZERO) -> Atom:
    items = tuple(sorted((x, Fraction(c)) for x, c in (coeffs or {}).items()))
    for x, c in items:
        if c <= 0:
            raise ValueError(f"atom coefficient for {x} must be positive, got {c}")
    return Atom(items, frozenset(tests), const)


@dataclass(frozen=True)
class SimpleNF:
    polarity: str
    clauses: tuple[tuple[Atom, ...], ...]
    n_atoms: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n_atoms", sum(len(c) for c in self.clauses))

    def const_value(self) -> Optional[ExtReal]:
        """The constant value of this form, or None if any variable occurs."""
        outer = INF if self.polarity == CNF else NEG_INF
        for clause in self.clauses:
            inner = NEG_INF if self.polarity == CNF else INF
            for a in clause:
                if not a.is_const():
                    return None
                inner = extreal.maximum(inner, a.const) if self.polarity == CNF else extreal.minimum(inner, a.const)
            outer = extreal.minimum(outer, inner) if self.polarity == CNF else extreal.maximum(outer, inner)
        return outer

    def variables(self) -> frozenset:
        out: set = set()
        for clause in self.clauses:
            for a in clause:
                out |= a.variables()
        return frozenset(out)

    def evaluate(self, valuation: Valuation) -> ExtReal:
        outer = INF if self.polarity == CNF else NEG_INF
        for clause in self.clauses:
            inner = NEG_INF if self.polarity == CNF else INF
            for a in clause:
                v = a.evaluate(valuation)
                inner = extreal.maximum(inner, v) if self.polarity == CNF else extreal.minimum(inner, v)
            outer = extreal.minimum(outer, inner) if self.polarity == CNF else extreal.maximum(outer, inner)
        return outer

    def to_expr(self) -> Expr:
        if not self.clauses:
            return Const(INF if self.polarity == CNF else NEG_INF)
        parts = []
        for clause in self.clauses:
            if not clause:
                parts.append(Const(NEG_INF if self.polarity == CNF else INF))
                continue
            exprs = [a.to_expr() for a in clause]
            inner = exprs[-1]
            for e in reversed(exprs[:-1]):
                inner = Max(e, inner) if self.polarity == CNF else Min(e, inner)
            parts.append(inner)
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = Min(p, out) if self.polarity == CNF else Max(p, out)
        return out


@dataclass(frozen=True)
class Leaf:
    simple: SimpleNF
    n_atoms: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n_atoms", self.simple.n_atoms)


@dataclass(frozen=True)
class CondNode:
    """Conditional node with a simple guard; `kind` picks the semantics:
    cond  -> low∧high when guard ≤ 0 else high;
    conda -> low when guard < 0 else low∨high."""

    kind: str
    guard: SimpleNF
    low: "NF"
    high: "NF"
    n_atoms: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "n_atoms", self.guard.n_atoms + self.low.n_atoms + self.high.n_atoms + 1
        )


NF = Union[Leaf, CondNode]


def nf_polarity(t: NF) -> str:
    while isinstance(t, CondNode):
        t = t.low
    return t.simple.polarity


def nf_variables(t: NF) -> frozenset:
    if isinstance(t, Leaf):
        return t.simple.variables()
    return t.guard.variables() | nf_variables(t.low) | nf_variables(t.high)


def nf_evaluate(t: NF, valuation: Valuation) -> ExtReal:
    if isinstance(t, Leaf):
        return t.simple.evaluate(valuation)
    g = t.guard.evaluate(valuation)
    if t.kind == COND:
        return extreal.cond(g, nf_evaluate(t.low, valuation), nf_evaluate(t.high, valuation))
    return extreal.conda(g, nf_evaluate(t.low, valuation), nf_evaluate(t.high, valuation))


def nf_to_expr(t: NF) -> Expr:
    if isinstance(t, Leaf):
        return t.simple.to_expr()
    node = Cond if t.kind == COND else CondA
    return node(t.guard.to_expr(), nf_to_expr(t.low), nf_to_expr(t.high))


def _atom_add(a: Atom, b: Atom) -> Atom:
    coeffs = dict(a.coeffs)
    for x, c in b.coeffs:
        coeffs[x] = coeffs.get(x, ZERO) + c
    return Atom(
        tuple(sorted(coeffs.items())),
        a.tests | b.tests,
        extreal.add(a.const, b.const),
    )


def _atom_scale(c: Fraction, a: Atom) -> Atom:
    return Atom(
        tuple((x, c * k) for x, k in a.coeffs),
        a.tests,
        extreal.scale(c, a.const),
    )


class Normalizer:
    """Rewriting engine; all products and clause constructions are counted
    against `max_atoms`."""

    def __init__(self, max_atoms: int = DEFAULT_MAX_ATOMS):
        self.max_atoms = max_atoms

    # -- simple-form constructors ------------------------------------------

    def _mk(self, polarity: str, clauses: Iterable[Iterable[Atom]]) -> SimpleNF:
        inner_identity = NEG_INF if polarity == CNF else INF
        inner_dominator = INF if polarity == CNF else NEG_INF
        out = []
        total = 0
        for clause in clauses:
            atoms = []
            dominated = False
            for a in clause:
                if a.is_const():
                    if a.const == inner_dominator:
                        dominated = True
                        break
                    if a.const == inner_identity:
                        continue
                atoms.append(a)
            if dominated:
                continue
            if not atoms:
                # the whole form collapses to the outer dominator
                return SimpleNF(polarity, ((),))
            total += len(atoms)
            if total > self.max_atoms:
                raise TermBlowup(f"normal form exceeds {self.max_atoms} atoms")
            out.append(tuple(atoms))
        return SimpleNF(polarity, tuple(out))

    def const_nf(self, value: ExtReal, polarity: str) -> SimpleNF:
        return self._mk(polarity, ((Atom(const=value),),))

    def var_nf(self, name: str, polarity: str) -> SimpleNF:
        return SimpleNF(polarity, ((Atom(coeffs=((name, Fraction(1)),)),),))

    def test_nf(self, name: str, polarity: str) -> SimpleNF:
        return SimpleNF(polarity, ((Atom(tests=frozenset((name,))),),))

    # -- simple-form combinators -------------------------------------------

    def _concat(self, a: SimpleNF, b: SimpleNF) -> SimpleNF:
        return self._mk(a.polarity, a.clauses + b.clauses)

    def _cross(self, a: SimpleNF, b: SimpleNF) -> SimpleNF:
        if len(a.clauses) * len(b.clauses) > self.max_atoms:
            raise TermBlowup(f"clause product exceeds {self.max_atoms}")
        return self._mk(a.polarity, (ca + cb for ca in a.clauses for cb in b.clauses))

    def meet_nf(self, a: SimpleNF, b: SimpleNF) -> SimpleNF:
        return self._concat(a, b) if a.polarity == CNF else self._cross(a, b)

    def join_nf(self, a: SimpleNF, b: SimpleNF) -> SimpleNF:
        return self._cross(a, b) if a.polarity == CNF else self._concat(a, b)

    def _explicit_clauses(self, s: SimpleNF) -> tuple[tuple[Atom, ...], ...]:
        """Replace empty-structure constants by explicit constant atoms.

        Addition does not distribute over empty joins/meets (a missing
        -inf summand would silently absorb an infinite operand), so the
        product form below needs every clause to carry its atoms.
        """
        if not s.clauses:
            return ((Atom(const=INF if s.polarity == CNF else NEG_INF),),)
        inner_empty = NEG_INF if s.polarity == CNF else INF
        return tuple(clause if clause else (Atom(const=inner_empty),) for clause in s.clauses)

    def add_nf(self, a: SimpleNF, b: SimpleNF) -> SimpleNF:
        ca_list = self._explicit_clauses(a)
        cb_list = self._explicit_clauses(b)
        size = sum(len(ca) * len(cb) for ca in ca_list for cb in cb_list)
        if size > self.max_atoms:
            raise TermBlowup(f"addition product exceeds {self.max_atoms}")
        return self._mk(
            a.polarity,
            (tuple(_atom_add(x, y) for x in ca for y in cb) for ca in ca_list for cb in cb_list),
        )

    def scale_nf(self, c: Fraction, a: SimpleNF) -> SimpleNF:
        return self._mk(a.polarity, (tuple(_atom_scale(c, x) for x in clause) for clause in a.clauses))

    def _eqninf_atom(self, a: Atom, polarity: str) -> SimpleNF:
        if a.is_const():
            return self.const_nf(extreal.eq_neg_inf(a.const), polarity)
        if a.const == INF:
            return self.const_nf(INF, polarity)
        names = [x for x, _ in a.coeffs]
        joins = [Atom(coeffs=((x, Fraction(1)),), const=NEG_INF) for x in names]
        joins += [Atom(tests=frozenset((y,))) for y in sorted(a.tests)]
        clauses: list[tuple[Atom, ...]] = []
        if a.const != NEG_INF:
            meet_part = tuple(Atom(tests=frozenset((v,))) for v in names + sorted(a.tests))
            clauses.append(meet_part)
        clauses.extend((j,) for j in joins)
        dnf = self._mk(DNF, clauses)
        return self.convert(dnf, polarity)

    def eqninf_nf(self, a: SimpleNF) -> SimpleNF:
        pol = a.polarity
        if pol == CNF:
            out = self.const_nf(INF, pol)
            for clause in a.clauses:
                acc = self.const_nf(NEG_INF, pol)
                for x in clause:
                    acc = self.join_nf(acc, self._eqninf_atom(x, pol))
                out = self.meet_nf(out, acc)
        else:
            out = self.const_nf(NEG_INF, pol)
            for clause in a.clauses:
                acc = self.const_nf(INF, pol)
                for x in clause:
                    acc = self.meet_nf(acc, self._eqninf_atom(x, pol))
                out = self.join_nf(out, acc)
        return out

    def convert(self, a: SimpleNF, polarity: str) -> SimpleNF:
        """Distribute a simple form into the opposite polarity."""
        if a.polarity == polarity:
            return a
        size = 1
        for clause in a.clauses:
            size *= len(clause)
            if size > self.max_atoms:
                raise TermBlowup(f"polarity conversion exceeds {self.max_atoms}")
        return self._mk(polarity, itertools.product(*a.clauses))

    # -- conditional trees ---------------------------------------------------

    def _leaf(self, simple: SimpleNF) -> Leaf:
        return Leaf(simple)

    def tree_const_value(self, t: NF) -> Optional[ExtReal]:
        if isinstance(t, Leaf):
            return t.simple.const_value()
        return None

    def cond_node(self, kind: str, guard: SimpleNF, low: NF, high: NF) -> NF:
        gv = guard.const_value()
        if gv is not None:
            if kind == COND:
                return self.t_meet(low, high) if gv <= 0 else high
            return low if gv < 0 else self.t_join(low, high)
        if kind == COND:
            if self.tree_const_value(high) == NEG_INF:
                return high
            if self.tree_const_value(low) == INF:
                return high
        else:
            if self.tree_const_value(low) == INF:
                return low
            if self.tree_const_value(high) == NEG_INF:
                return low
        if low == high:
            return low
        node = CondNode(kind, guard, low, high)
        if node.n_atoms > self.max_atoms:
            raise TermBlowup(f"conditional tree exceeds {self.max_atoms} atoms")
        return node

    def _t_combine(self, op, t1: NF, t2: NF) -> NF:
        if isinstance(t1, CondNode):
            return self.cond_node(
                t1.kind, t1.guard, self._t_combine(op, t1.low, t2), self._t_combine(op, t1.high, t2)
            )
        if isinstance(t2, CondNode):
            return self.cond_node(
                t2.kind, t2.guard, self._t_combine(op, t1, t2.low), self._t_combine(op, t1, t2.high)
            )
        return self._leaf(op(t1.simple, t2.simple))

    def t_meet(self, t1: NF, t2: NF) -> NF:
        return self._t_combine(self.meet_nf, t1, t2)

    def t_join(self, t1: NF, t2: NF) -> NF:
        return self._t_combine(self.join_nf, t1, t2)

    def t_add(self, t1: NF, t2: NF) -> NF:
        return self._t_combine(self.add_nf, t1, t2)

    def t_scale(self, c: Fraction, t: NF) -> NF:
        if isinstance(t, CondNode):
            return self.cond_node(t.kind, t.guard, self.t_scale(c, t.low), self.t_scale(c, t.high))
        return self._leaf(self.scale_nf(c, t.simple))

    def t_eqninf(self, t: NF) -> NF:
        if isinstance(t, CondNode):
            return self.cond_node(t.kind, t.guard, self.t_eqninf(t.low), self.t_eqninf(t.high))
        return self._leaf(self.eqninf_nf(t.simple))

    def attach(self, kind: str, guard_tree: NF, low: NF, high: NF) -> NF:
        """Build `kind(guard_tree, low, high)` as a normal form.

        A conditional guard is case-split on its own guard: the branch values
        are the guard's low/high outcomes, which are strictly smaller trees.
        Meets and joins of guard outcomes chain through nested conditionals
        instead of being multiplied out, so the recursion always terminates.
        """
        if isinstance(guard_tree, Leaf):
            return self.cond_node(kind, guard_tree.simple, low, high)
        g = guard_tree
        if g.kind == COND:
            hi = self.attach(kind, g.high, low, high)
            lo = self.attach(kind, g.low, low, hi)
            return self.cond_node(COND, g.guard, lo, hi)
        lo = self.attach(kind, g.low, low, high)
        inner = self.attach(kind, g.high, low, high)
        hi = self.attach(kind, g.low, inner, high)
        return self.cond_node(CONDA, g.guard, lo, hi)

    # -- expression -> normal form -------------------------------------------

    def to_simple_nf(self, e: Expr, polarity: str) -> SimpleNF:
        match e:
            case Var(name):
                return self.var_nf(name, polarity)
            case Const(value):
                return self.const_nf(value, polarity)
            case Scale(coeff, arg):
                return self.scale_nf(coeff, self.to_simple_nf(arg, polarity))
            case Add(left, right):
                return self.add_nf(self.to_simple_nf(left, polarity), self.to_simple_nf(right, polarity))
            case Min(left, right):
                return self.meet_nf(self.to_simple_nf(left, polarity), self.to_simple_nf(right, polarity))
            case Max(left, right):
                return self.join_nf(self.to_simple_nf(left, polarity), self.to_simple_nf(right, polarity))
            case EqInf(arg):
                return self.add_nf(self.to_simple_nf(arg, polarity), self.const_nf(NEG_INF, polarity))
            case EqNegInf(arg):
                return self.eqninf_nf(self.to_simple_nf(arg, polarity))
            case Cond(_, _, _) | CondA(_, _, _):
                raise ConditionalPresent("simple normal form requires a conditional-free expression")
            case Neg(_):
                raise NegationPresent("normal form requires a negation-free expression")
        raise TypeError(f"not an expression: {e!r}")

    def to_nf(self, e: Expr, polarity: str) -> NF:
        match e:
            case Var(_) | Const(_):
                return self._leaf(self.to_simple_nf(e, polarity))
            case Scale(coeff, arg):
                return self.t_scale(coeff, self.to_nf(arg, polarity))
            case Add(left, right):
                return self.t_add(self.to_nf(left, polarity), self.to_nf(right, polarity))
            case Min(left, right):
                return self.t_meet(self.to_nf(left, polarity), self.to_nf(right, polarity))
            case Max(left, right):
                return self.t_join(self.to_nf(left, polarity), self.to_nf(right, polarity))
            case EqInf(arg):
                return self.t_add(self.to_nf(arg, polarity), self._leaf(self.const_nf(NEG_INF, polarity)))
            case EqNegInf(arg):
                return self.t_eqninf(self.to_nf(arg, polarity))
            case Cond(guard, low, high):
                return self.attach(
                    COND, self.to_nf(guard, polarity), self.to_nf(low, polarity), self.to_nf(high, polarity)
                )
            case CondA(guard, low, high):
                return self.attach(
                    CONDA, self.to_nf(guard, polarity), self.to_nf(low, polarity), self.to_nf(high, polarity)
                )
            case Neg(_):
                raise NegationPresent("normal form requires a negation-free expression")
        raise TypeError(f"not an expression: {e!r}")

    # -- simplification --------------------------------------------------------

    def simplify_simple(self, s: SimpleNF) -> SimpleNF:
        pol = s.polarity
        outer_identity = INF if pol == CNF else NEG_INF
        outer_dominator = NEG_INF if pol == CNF else INF
        inner_identity = NEG_INF if pol == CNF else INF
        inner_join = extreal.maximum if pol == CNF else extreal.minimum
        outer_fold = extreal.minimum if pol == CNF else extreal.maximum

        const_acc = outer_identity
        reduced: list[frozenset] = []
        for clause in s.clauses:
            seen: set[Atom] = set()
            const_part = inner_identity
            var_atoms = []
            for a in clause:
                if a.is_const():
                    const_part = inner_join(const_part, a.const)
                elif a not in seen:
                    seen.add(a)
                    var_atoms.append(a)
            inner_dominator = INF if pol == CNF else NEG_INF
            if const_part == inner_dominator:
                continue  # clause is the outer identity
            if not var_atoms:
                const_acc = outer_fold(const_acc, const_part)
                if const_acc == outer_dominator:
                    return self.const_nf(outer_dominator, pol)
                continue
            if const_part != inner_identity:
                var_atoms.append(Atom(const=const_part))
            reduced.append(frozenset(var_atoms))

        # drop supersets: in both polarities the subset clause decides the fold
        reduced = sorted(set(reduced), key=len)
        kept: list[frozenset] = []
        for c in reduced:
            if not any(k <= c for k in kept):
                kept.append(c)

        clauses = sorted(
            (tuple(sorted(c, key=Atom.sort_key)) for c in kept),
            key=lambda c: tuple(a.sort_key() for a in c),
        )
        if const_acc != outer_identity:
            clauses.append((Atom(const=const_acc),))
        return self._mk(pol, clauses)

    def simplify_nf(self, t: NF) -> NF:
        prev = None
        while t != prev:
            prev = t
            t = self._simplify_nf_once(t)
        return t

    def _simplify_nf_once(self, t: NF) -> NF:
        if isinstance(t, Leaf):
            return self._leaf(self.simplify_simple(t.simple))
        return self.cond_node(
            t.kind,
            self.simplify_simple(t.guard),
            self._simplify_nf_once(t.low),
            self._simplify_nf_once(t.high),
        )


_DEFAULT = Normalizer()


def to_simple_nf(e: Expr, polarity: str, normalizer: Optional[Normalizer] = None) -> SimpleNF:
    return (normalizer or _DEFAULT).to_simple_nf(e, polarity)


def to_nf(e: Expr, polarity: str, normalizer: Optional[Normalizer] = None) -> NF:
    return (normalizer or _DEFAULT).to_nf(e, polarity)


def normalize_guard(e: Expr, polarity: str = CNF, normalizer: Optional[Normalizer] = None) -> Expr:
    """Rewrite a conditional so that its guard is a simple normal form."""
    if not isinstance(e, (Cond, CondA)):
        raise NotConditional(f"expected a conditional expression, got {type(e).__name__}")
    return nf_to_expr((normalizer or _DEFAULT).to_nf(e, polarity))


def simplify(x, normalizer: Optional[Normalizer] = None):
    """Semantics-preserving cleanup; accepts Expr, SimpleNF or NF values."""
    n = normalizer or _DEFAULT
    if isinstance(x, SimpleNF):
        return n.simplify_simple(x)
    if isinstance(x, (Leaf, CondNode)):
        return n.simplify_nf(x)
    return simplify_expr(x)


# -- expression-level simplification -------------------------------------------


def _flatten(cls, e: Expr, out: list):
    if isinstance(e, cls):
        _flatten(cls, e.left, out)
        _flatten(cls, e.right, out)
    else:
        out.append(e)


def _rebuild(cls, terms: list[Expr]) -> Expr:
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = cls(t, out)
    return out


def simplify_expr(e: Expr) -> Expr:
    """Constant folding plus sound lattice identities, run to a fixpoint."""
    prev = None
    while e != prev:
        prev = e
        e = _simp(e)
    return e


def _forces_inf(e: Expr, trigger: Expr) -> bool:
    """Conservatively: does trigger = inf force e = inf under any valuation?"""
    if e == trigger:
        return True
    match e:
        case Const(v):
            return v == INF
        case Add(left, right) | Max(left, right):
            return _forces_inf(left, trigger) or _forces_inf(right, trigger)
        case Min(left, right):
            return _forces_inf(left, trigger) and _forces_inf(right, trigger)
        case Scale(_, arg) | EqInf(arg):
            return _forces_inf(arg, trigger)
    return False


def _never_inf(e: Expr) -> bool:
    """Conservatively: can e never evaluate to inf?"""
    match e:
        case Const(v):
            return v != INF
        case Add(left, right) | Max(left, right):
            return _never_inf(left) and _never_inf(right)
        case Min(left, right):
            return _never_inf(left) or _never_inf(right)
        case Scale(_, arg) | EqInf(arg):
            return _never_inf(arg)
    return False


def _forces_neg_inf(e: Expr, trigger: Expr) -> bool:
    """Conservatively: does trigger = -inf force e = -inf under any valuation?"""
    if e == trigger:
        return True
    match e:
        case Const(v):
            return v == NEG_INF
        case Add(left, right):
            return (_forces_neg_inf(left, trigger) and _never_inf(right)) or (
                _forces_neg_inf(right, trigger) and _never_inf(left)
            )
        case Min(left, right):
            return _forces_neg_inf(left, trigger) or _forces_neg_inf(right, trigger)
        case Max(left, right):
            return _forces_neg_inf(left, trigger) and _forces_neg_inf(right, trigger)
        case Scale(_, arg) | EqNegInf(arg):
            return _forces_neg_inf(arg, trigger)
    return False


def _simp(e: Expr) -> Expr:
    match e:
        case Var(_) | Const(_):
            return e
        case Scale(c, arg):
            a = _simp(arg)
            if c == 1:
                return a
            if isinstance(a, Const):
                return Const(extreal.scale(c, a.value))
            if isinstance(a, Scale):
                return Scale(c * a.coeff, a.arg)
            return Scale(c, a)
        case Add(_, _):
            terms: list[Expr] = []
            _flatten(Add, e, terms)
            terms = [_simp(t) for t in terms]
            if any(isinstance(t, Const) and t.value == INF for t in terms):
                return Const(INF)
            const_sum = ZERO
            rest = []
            for t in terms:
                if isinstance(t, Const):
                    const_sum = extreal.add(const_sum, t.value)
                else:
                    rest.append(t)
            if not rest:
                return Const(const_sum)
            if const_sum != ZERO:
                rest.append(Const(const_sum))
            return _rebuild(Add, rest)
        case Min(_, _) | Max(_, _):
            is_min = isinstance(e, Min)
            cls = Min if is_min else Max
            identity = INF if is_min else NEG_INF
            dominator = NEG_INF if is_min else INF
            fold = extreal.minimum if is_min else extreal.maximum
            terms = []
            _flatten(cls, e, terms)
            terms = [_simp(t) for t in terms]
            const_part = identity
            rest = []
            for t in terms:
                if isinstance(t, Const):
                    const_part = fold(const_part, t.value)
                elif t not in rest:
                    rest.append(t)
            if const_part == dominator or not rest:
                return Const(const_part)
            if const_part != identity:
                rest.append(Const(const_part))
            return _rebuild(cls, rest)
        case Cond(guard, low, high):
            g, a, b = _simp(guard), _simp(low), _simp(high)
            if isinstance(g, Const):
                return _simp(Min(a, b)) if g.value <= 0 else b
            if isinstance(b, Const) and b.value == NEG_INF:
                return b
            if isinstance(a, Const) and a.value == INF:
                return b
            if a == b:
                return a
            # "inf when t is infinite, else a" is a itself when t=inf forces a=inf
            if isinstance(g, EqInf) and isinstance(b, Const) and b.value == INF and _forces_inf(a, g.arg):
                return a
            # "-inf when t is -infinite, else b" is b when t=-inf forces b=-inf
            if (
                isinstance(g, EqNegInf)
                and isinstance(a, Const)
                and a.value == NEG_INF
                and _forces_neg_inf(b, g.arg)
            ):
                return b
            return Cond(g, a, b)
        case CondA(guard, low, high):
            g, a, b = _simp(guard), _simp(low), _simp(high)
            if isinstance(g, Const):
                return a if g.value < 0 else _simp(Max(a, b))
            if isinstance(a, Const) and a.value == INF:
                return a
            if isinstance(b, Const) and b.value == NEG_INF:
                return a
            if a == b:
                return a
            return CondA(g, a, b)
        case EqInf(arg):
            a = _simp(arg)
            match a:
                case Const(v):
                    return Const(extreal.eq_inf(v))
                case EqInf(_) | EqNegInf(_):
                    return a
                case Scale(_, inner):
                    return EqInf(inner)
                case Min(x, y):
                    return Min(EqInf(x), EqInf(y))
                case Max(x, y):
                    return Max(EqInf(x), EqInf(y))
                case Add(x, y):
                    return Max(EqInf(x), EqInf(y))
            return EqInf(a)
        case EqNegInf(arg):
            a = _simp(arg)
            match a:
                case Const(v):
                    return Const(extreal.eq_neg_inf(v))
                case EqNegInf(_):
                    return a
                case EqInf(inner):
                    return EqInf(inner)
                case Scale(_, inner):
                    return EqNegInf(inner)
                case Min(x, y):
                    return Min(EqNegInf(x), EqNegInf(y))
                case Max(x, y):
                    return Max(EqNegInf(x), EqNegInf(y))
                case Add(x, y):
                    return Min(Max(EqNegInf(x), EqInf(y)), Max(EqInf(x), EqNegInf(y)))
            return EqNegInf(a)
        case Neg(_):
            return e
    raise TypeError(f"not an expression: {e!r}")
