"""Lower Newton polygons of value sequences and the root-valuation multisets
they encode.

Sign convention, fixed once for every consumer: for a monic polynomial whose
coefficient of x^i has value v_i, the multiset of root values equals
{-slope : horizontal length} over the sides of the lower convex hull of
(i, v_i), plus infinity with multiplicity = index of the first finite point
(roots equal to zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import TooFewPoints
from .value import INFINITY, Value


@dataclass(frozen=True)
class Side:
    slope: Fraction
    horizontal_length: int


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple  # (index, Value), finite values only, increasing index
    vertices: tuple  # subset on the lower hull
    sides: tuple  # Side, ordered by strictly increasing slope

    def as_json(self):
        return [
            {"slope": [s.slope.numerator, s.slope.denominator], "length": s.horizontal_length}
            for s in self.sides
        ]


def lower_hull(points) -> NewtonPolygon:
    """Lower convex hull; infinite values are dropped, collinear interior
    points are not vertices, equal-slope sides are merged."""
    finite = sorted((int(i), v) for i, v in points if not _as_value(v).is_infinite)
    if len({i for i, _ in finite}) != len(finite):
        raise TooFewPoints("duplicate indices")
    if len(finite) < 2:
        raise TooFewPoints(f"need at least 2 finite points, got {len(finite)}")
    pts = [(i, _as_value(v).finite) for i, v in finite]
    hull = []
    for pt in pts:
        while len(hull) >= 2 and _turns_right_or_straight(hull[-2], hull[-1], pt):
            hull.pop()
        hull.append(pt)
    sides = []
    for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
        sides.append(Side(Fraction(v1 - v0, i1 - i0), i1 - i0))
    return NewtonPolygon(
        points=tuple((i, Value(v)) for i, v in pts),
        vertices=tuple((i, Value(v)) for i, v in hull),
        sides=tuple(sides),
    )


def _turns_right_or_straight(a, b, c) -> bool:
    # drop b when a->b->c is not a strict left turn (keeps extreme vertices only)
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) <= 0


def _as_value(v) -> Value:
    return v if isinstance(v, Value) else Value(v)


@dataclass(frozen=True)
class RootValuationMultiset:
    """Finite root values with multiplicities, strictly decreasing; roots equal
    to zero counted separately in ``zero_root_multiplicity`` (value infinity)."""

    entries: tuple  # (Value, multiplicity), strictly decreasing by value
    zero_root_multiplicity: int

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def all_entries(self):
        if self.zero_root_multiplicity:
            return ((INFINITY, self.zero_root_multiplicity),) + self.entries
        return self.entries

    def support(self):
        return tuple(v for v, _ in self.entries)

    def count_at_least(self, gamma: Value) -> int:
        """Number of roots r (with multiplicity) whose value is >= gamma."""
        n = self.zero_root_multiplicity
        for v, m in self.entries:
            if not (v < gamma):
                n += m
        return n

    def as_json(self):
        return [[v.finite.numerator, v.finite.denominator, m] for v, m in self.entries]


def root_valuations(coeff_values) -> RootValuationMultiset:
    """Root-value multiset of a polynomial given by its coefficient values
    (index = degree, lowest first).  The polynomial is treated as monic up to
    a unit: values are those of the roots in any valued extension."""
    vals = [_as_value(v) for v in coeff_values]
    while vals and vals[-1].is_infinite:
        vals.pop()
    if not vals:
        raise TooFewPoints("zero polynomial has no roots")
    deg = len(vals) - 1
    m0 = next(i for i, v in enumerate(vals) if not v.is_infinite)
    if m0 == deg:
        return RootValuationMultiset(entries=(), zero_root_multiplicity=m0)
    polygon = lower_hull((i, v) for i, v in enumerate(vals))
    entries = []
    for side in polygon.sides:  # slopes increase, so -slope decreases
        entries.append((Value(-side.slope), side.horizontal_length))
    assert all(entries[i][0] > entries[i + 1][0] for i in range(len(entries) - 1))
    out = RootValuationMultiset(entries=tuple(entries), zero_root_multiplicity=m0)
    assert out.total + m0 == deg
    return out
