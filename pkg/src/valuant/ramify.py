"""Ramification ideals of finite Galois extensions as value-group cuts.

In rank one with value group inside Q an ideal of the valuation ring is
pinned down by its boundary: an endpoint together with whether the bound is
attained.  The ideal attached to a subgroup H is generated by sigma(b)/b - 1
over sigma in H for a pure normalized generator b, and monotone norm bounds
collapse the generating set to the single element of minimal distance, so the
cut is computed directly from the distance map d(sigma) = v(sigma b - b).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Union

from .errors import GeneratorNotPure, NotASubgroup, NotDistinguishedPair
from .value import INFINITY, Value, vmin


@dataclass(frozen=True)
class CutDescriptor:
    """Shape of v(a - K): attained maximum (defectless distinguished pair) or a
    principal cut {gamma' < endpoint} (defect case)."""

    kind: str  # "attained" | "principal"
    endpoint: Fraction

    def as_json(self):
        return {"kind": self.kind, "endpoint": [self.endpoint.numerator, self.endpoint.denominator]}


@dataclass(frozen=True)
class CutIdeal:
    """An ideal of the rank-one valuation ring: {v >= endpoint} when closed,
    {v > endpoint} when open.  Equality of ideals is equality of the data."""

    endpoint: Fraction
    closed: bool

    def contains(self, other: "CutIdeal") -> bool:
        if self.endpoint != other.endpoint:
            return self.endpoint < other.endpoint
        return self.closed or not other.closed

    def as_json(self):
        return {
            "endpoint": [self.endpoint.numerator, self.endpoint.denominator],
            "closed": self.closed,
        }


UNIT = "unit-ideal"


@dataclass
class GroupModel:
    """A finite group with a distance map d(sigma) = v(sigma a - a) for a pure
    generator a, plus the regime data needed to turn distances into ideals.

    Models may be transplanted: the table entered abstractly, the distances
    computed from a tower over a small base.  The ultrametric and inversion
    laws of d are checked at construction."""

    elements: list  # names; index 0 is the identity
    table: list  # table[i][j] = index of elements[i]*elements[j]
    distance: list  # Value per element; distance[0] is INFINITY
    value_of_a: Value
    regime: str  # "defectless" | "defect"
    cut: Optional[CutDescriptor] = None
    pure: bool = True

    def __post_init__(self):
        n = len(self.elements)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("composition table has wrong shape")
        if any(self.table[0][j] != j or self.table[j][0] != j for j in range(n)):
            raise ValueError("element 0 must be the identity")
        if len(self.distance) != n or not self.distance[0].is_infinite:
            raise ValueError("distance must assign INFINITY to the identity")
        if self.regime == "defect" and (self.cut is None or self.cut.kind != "principal"):
            raise ValueError("defect regime needs a principal cut descriptor")
        for i in range(n):
            inv = self._inverse(i)
            if self.distance[inv] != self.distance[i]:
                raise ValueError("d(sigma^-1) must equal d(sigma)")
            for j in range(n):
                dij = self.distance[self.table[i][j]]
                if dij < vmin([self.distance[i], self.distance[j]]):
                    raise ValueError("d must satisfy the ultrametric law on the group")

    def _inverse(self, i: int) -> int:
        for j in range(len(self.elements)):
            if self.table[i][j] == 0:
                return j
        raise ValueError(f"element {i} has no inverse")

    @property
    def order(self) -> int:
        return len(self.elements)

    def distance_multiset(self):
        """Sorted multiset of d(sigma) over sigma != id (decreasing)."""
        ds = sorted(self.distance[1:], reverse=True)
        out = []
        for v in ds:
            if out and out[-1][0] == v:
                out[-1] = (v, out[-1][1] + 1)
            else:
                out.append((v, 1))
        return out


def subgroups(model: GroupModel, nontrivial: bool = True):
    """All subgroups by brute-force closure, deterministic order."""
    n = model.order
    found = set()
    found.add(frozenset([0]))
    for size in range(1, n):
        for gens in combinations(range(1, n), size):
            H = _closure(model, set(gens) | {0})
            found.add(frozenset(H))
    out = sorted(found, key=lambda H: (len(H), sorted(H)))
    if nontrivial:
        out = [H for H in out if len(H) > 1]
    return out


def _closure(model: GroupModel, seed: set) -> set:
    H = set(seed)
    changed = True
    while changed:
        changed = False
        for i in list(H):
            for j in list(H):
                k = model.table[i][j]
                if k not in H:
                    H.add(k)
                    changed = True
    return H


def check_subgroup(model: GroupModel, H) -> frozenset:
    H = frozenset(H)
    if 0 not in H:
        raise NotASubgroup("subgroup must contain the identity")
    for i in H:
        for j in H:
            if model.table[i][j] not in H:
                raise NotASubgroup("set is not closed under composition")
    return H


def ideal_of_subgroup(model: GroupModel, H) -> Union[CutIdeal, str]:
    """The cut of the ideal (sigma b / b - 1 | sigma in H) for the pure
    normalized generator; UNIT when it contains a unit."""
    if not model.pure:
        raise GeneratorNotPure("the model's generator must be pure (depth one)")
    H = check_subgroup(model, H)
    nontrivial = [i for i in H if i != 0]
    if not nontrivial:
        raise NotASubgroup("the trivial subgroup carries no ramification ideal")
    dmin = vmin([model.distance[i] for i in nontrivial])
    if model.regime == "defectless":
        if dmin.is_infinite:
            raise ValueError("non-identity element at infinite distance")
        endpoint = dmin.finite - model.value_of_a.finite
        if endpoint <= 0:
            return UNIT
        return CutIdeal(endpoint=endpoint, closed=True)
    # defect regime with principal cut delta*: generators (sigma a - a)/(a - z)
    # over v(a - z) -> delta*, never attained: an open cut
    endpoint = dmin.finite - model.cut.endpoint
    if endpoint < 0:
        return UNIT
    return CutIdeal(endpoint=endpoint, closed=False)


def count_ram(model: GroupModel) -> int:
    """Number of distinct ramification ideals over all nontrivial subgroups."""
    ideals = set()
    for H in subgroups(model):
        ideal = ideal_of_subgroup(model, H)
        if ideal != UNIT:
            ideals.add(ideal)
    return len(ideals)


def ramification_ideals(model: GroupModel):
    out = {}
    for H in subgroups(model):
        ideal = ideal_of_subgroup(model, H)
        out[tuple(sorted(H))] = ideal
    return out


def valuation_basis_check(b, trials: int = 200, seed: int = 0, degree: Optional[int] = None):
    """For (b, 0) a distinguished pair of degree n, {1, b, ..., b^(n-1)} is a
    valuation basis: v(sum c_i b^i) = min v(c_i b^i) exactly.  Runs seeded
    random coefficient vectors; returns (holds, witness)."""
    import random as _random

    from .basefield import standard_sample

    tower = b.tower
    decl = tower.declarations
    if not (decl.get("distinguished_at_zero") or decl.get("pure")):
        certified = False
        if tower.base.maclane_supported:
            from .maclane import depth_of

            certified = depth_of(b) == 1
        if not certified:
            raise NotDistinguishedPair(
                "declare distinguished_at_zero=true or let depth certify purity"
            )
    n = degree if degree is not None else b.min_poly().degree
    if n == 1:
        return True, None
    powers = [tower.one()]
    for _ in range(1, n):
        powers.append(powers[-1] * b)
    vals_b = [p.val() for p in powers]
    # height-bounded coefficient sample: the standard base sample extended by
    # small uniformizer powers and a non-unit scalar
    K = tower.base.field
    sample = list(standard_sample(tower.base))
    two = K.from_int(2)
    sample += [
        tower.base.uniformizer_power(2),
        tower.base.uniformizer_power(-2),
        two,
        K.mul(two, tower.base.uniformizer_power(1)),
    ]
    rng = _random.Random(seed)
    for _ in range(trials):
        cs = [rng.choice(sample) for _ in range(n)]
        if all(tower.base.field.is_zero(c) for c in cs):
            continue
        terms = [
            vals_b[i] + tower.base.val(c)
            for i, c in enumerate(cs)
            if not tower.base.field.is_zero(c)
        ]
        expected = vmin(terms)
        total = tower.zero()
        for i, c in enumerate(cs):
            total = total + tower.from_base(c) * powers[i]
        if total.val() != expected:
            return False, cs
    return True, None
