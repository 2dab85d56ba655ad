"""Exact arithmetic and lattice operations on the extended reals.

Values are either exact rationals (`fractions.Fraction`) or one of the two
float infinities.  No other floats are ever constructed, so all arithmetic
and comparisons stay exact.  Two additions live side by side: `add` lets
infinity win on mixed infinite operands, `hat_add` lets minus infinity win.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

ExtReal = Union[Fraction, float]

INF: ExtReal = float("inf")
NEG_INF: ExtReal = float("-inf")
ZERO = Fraction(0)
ONE = Fraction(1)


def finite(value) -> Fraction:
    """Coerce an int/str/Fraction into an exact finite value."""
    return Fraction(value)


def is_finite(a: ExtReal) -> bool:
    return isinstance(a, Fraction)


def is_valid(a: ExtReal) -> bool:
    return isinstance(a, Fraction) or a == INF or a == NEG_INF


def add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Addition where any infinite operand of opposite signs yields +inf."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    if a == INF or b == INF:
        return INF
    return NEG_INF


def hat_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Addition where any infinite operand of opposite signs yields -inf."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return INF


def scale(c: Fraction, a: ExtReal) -> ExtReal:
    """Multiply by a strictly positive rational constant; fixes both infinities."""
    if not (isinstance(c, Fraction) and c > 0):
        raise ValueError(f"scale constant must be a positive rational, got {c!r}")
    if isinstance(a, Fraction):
        return c * a
    return a


def minimum(a: ExtReal, b: ExtReal) -> ExtReal:
    return a if a <= b else b


def maximum(a: ExtReal, b: ExtReal) -> ExtReal:
    return a if a >= b else b


def compare(a: ExtReal, b: ExtReal) -> int:
    """Total order: -1, 0 or 1.  Mixed Fraction/infinity comparisons are exact."""
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def cond(g: ExtReal, a: ExtReal, b: ExtReal) -> ExtReal:
    """min(a, b) when the guard is at most zero, otherwise b."""
    return minimum(a, b) if g <= 0 else b


def conda(g: ExtReal, a: ExtReal, b: ExtReal) -> ExtReal:
    """a when the guard is below zero, otherwise max(a, b)."""
    return a if g < 0 else maximum(a, b)


def eq_inf(a: ExtReal) -> ExtReal:
    return INF if a == INF else NEG_INF


def eq_neg_inf(a: ExtReal) -> ExtReal:
    return NEG_INF if a == NEG_INF else INF


def negate(a: ExtReal) -> ExtReal:
    return -a


def sort_key(a: ExtReal) -> tuple:
    """Key usable to order mixed finite/infinite values deterministically."""
    if a == NEG_INF:
        return (-1, ZERO)
    if a == INF:
        return (1, ZERO)
    return (0, a)


def format_value(a: ExtReal) -> str:
    """Render as `inf`, `-inf`, an integer, or `p/q` in lowest terms."""
    if a == INF:
        return "inf"
    if a == NEG_INF:
        return "-inf"
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def parse_value(text: str) -> ExtReal:
    """Inverse of format_value."""
    text = text.strip()
    if text == "inf":
        return INF
    if text == "-inf":
        return NEG_INF
    return Fraction(text)
