"""Values in the rank-one value group: rationals together with +infinity.

INFINITY absorbs addition and dominates every finite value, so min/max are
total on any finite set of values.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering


@total_ordering
class Value:
    """A rational number or +infinity, with exact arithmetic."""

    __slots__ = ("q",)

    def __init__(self, q=None):
        # q=None encodes +infinity
        self.q = Fraction(q) if q is not None else None

    @property
    def is_infinite(self) -> bool:
        return self.q is None

    @property
    def finite(self) -> Fraction:
        if self.q is None:
            raise ValueError("value is infinite")
        return self.q

    def __add__(self, other):
        other = _coerce(other)
        if self.q is None or other.q is None:
            return INFINITY
        return Value(self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other.q is None:
            raise ValueError("cannot subtract infinity")
        if self.q is None:
            return INFINITY
        return Value(self.q - other.q)

    def __mul__(self, n):
        # scalar multiple by an integer/rational; n * INFINITY stays infinite for n > 0
        if self.q is None:
            if n == 0:
                raise ValueError("0 * infinity undefined")
            return INFINITY
        return Value(self.q * Fraction(n))

    __rmul__ = __mul__

    def __neg__(self):
        if self.q is None:
            raise ValueError("cannot negate infinity")
        return Value(-self.q)

    def __eq__(self, other):
        other = _coerce(other)
        return self.q == other.q

    def __lt__(self, other):
        other = _coerce(other)
        if self.q is None:
            return False
        if other.q is None:
            return True
        return self.q < other.q

    def __hash__(self):
        return hash(self.q)

    def __repr__(self):
        return "oo" if self.q is None else str(self.q)

    def as_pair(self):
        """Exact JSON form: [numerator, denominator], or None for infinity."""
        if self.q is None:
            return None
        return [self.q.numerator, self.q.denominator]


def _coerce(x) -> Value:
    if isinstance(x, Value):
        return x
    return Value(x)


INFINITY = Value(None)


def vmin(values) -> Value:
    values = list(values)
    if not values:
        raise ValueError("min of empty value set")
    m = values[0]
    for v in values[1:]:
        if v < m:
            m = v
    return m


def vmax(values) -> Value:
    values = list(values)
    if not values:
        raise ValueError("max of empty value set")
    m = values[0]
    for v in values[1:]:
        if m < v:
            m = v
    return m
