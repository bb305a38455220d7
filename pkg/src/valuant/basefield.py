"""Explicitly presented valued base fields (K, v) with value group Z.

Two kinds: rational functions over a coefficient field with the order-of-
vanishing valuation at the uniformizer, and Q with a p-adic valuation.  All
invariants computed downstream depend only on the unique extension of v to the
henselization, so this presentation stands in for the henselian base.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero, ResidueFieldUnsupported
from .fields import QQ, Field, FractionField, PrimeField, Poly
from .value import INFINITY, Value


class BaseField:
    """Common surface of the valued base presentations."""

    field: Field
    kind: str
    uniformizer_name: str

    def val(self, x) -> Value:
        raise NotImplementedError

    def uniformizer(self):
        raise NotImplementedError

    def uniformizer_power(self, k: int):
        """pi^k as a field element; k may be negative."""
        raise NotImplementedError

    @property
    def residue_field(self) -> Field:
        raise NotImplementedError

    @property
    def maclane_supported(self) -> bool:
        """Inductive-valuation machinery needs a finite residue field."""
        return isinstance(self.residue_field, PrimeField)

    def residue(self, x):
        """Image in the residue field; requires val(x) == 0."""
        raise NotImplementedError

    def lift_residue(self, r):
        raise NotImplementedError

    def require_maclane(self):
        if not self.maclane_supported:
            raise ResidueFieldUnsupported(
                f"residue field {self.residue_field!r} is not finite"
            )


class TAdicField(BaseField):
    """K = C(t) with v = order of vanishing at t = 0; residue field C."""

    def __init__(self, coeff_field: Field, uniformizer_name: str = "t"):
        self.coeff = coeff_field
        self.uniformizer_name = uniformizer_name
        self.field = FractionField(coeff_field, uniformizer_name)
        self.kind = "t-adic"

    def val(self, x) -> Value:
        num, den = x
        if num.is_zero:
            return INFINITY
        return Value(_ord_at_zero(num) - _ord_at_zero(den))

    def uniformizer(self):
        return self.field.gen()

    def uniformizer_power(self, k: int):
        if k >= 0:
            return (Poly.x(self.coeff) ** k, Poly.one(self.coeff))
        return (Poly.one(self.coeff), Poly.x(self.coeff) ** (-k))

    @property
    def residue_field(self) -> Field:
        return self.coeff

    def residue(self, x):
        num, den = x
        if self.val(x) != Value(0):
            raise DivisionByZero("residue needs value exactly 0")
        return self.coeff.div(num.coeff(0), den.coeff(0))

    def lift_residue(self, r):
        return (Poly.const(self.coeff, r), Poly.one(self.coeff))

    def __eq__(self, other):
        return (
            isinstance(other, TAdicField)
            and other.coeff == self.coeff
            and other.uniformizer_name == self.uniformizer_name
        )

    def __hash__(self):
        return hash(("t-adic", self.coeff, self.uniformizer_name))

    def __repr__(self):
        return f"{self.coeff!r}(({self.uniformizer_name}))"


class PAdicField(BaseField):
    """K = Q with the p-adic valuation; residue field F_p."""

    def __init__(self, p: int):
        self._res = PrimeField(p)  # validates primality
        self.p = p
        self.field = QQ
        self.kind = "p-adic"
        self.uniformizer_name = str(p)

    def val(self, x: Fraction) -> Value:
        if x == 0:
            return INFINITY
        v = 0
        n, d = x.numerator, x.denominator
        while n % self.p == 0:
            n //= self.p
            v += 1
        while d % self.p == 0:
            d //= self.p
            v -= 1
        return Value(v)

    def uniformizer(self):
        return Fraction(self.p)

    def uniformizer_power(self, k: int):
        return Fraction(self.p) ** k

    @property
    def residue_field(self) -> Field:
        return self._res

    def residue(self, x: Fraction):
        if self.val(x) != Value(0):
            raise DivisionByZero("residue needs value exactly 0")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p

    def lift_residue(self, r):
        return Fraction(int(r) % self.p)

    def __eq__(self, other):
        return isinstance(other, PAdicField) and other.p == self.p

    def __hash__(self):
        return hash(("p-adic", self.p))

    def __repr__(self):
        return f"QQ_({self.p})"


def _ord_at_zero(f: Poly) -> int:
    for i, c in enumerate(f.coeffs):
        if not f.ring.is_zero(c):
            return i
    raise DivisionByZero("order of zero polynomial")


def standard_sample(base: BaseField):
    """The documented small sample of base elements used by exhaustive checks:
    0, +-1, +-pi, +-1/pi, and +-u when the coefficient field has a variable."""
    K = base.field
    pi = base.uniformizer()
    out = [K.zero(), K.one(), K.neg(K.one()), pi, K.neg(pi), K.inv(pi), K.neg(K.inv(pi))]
    if isinstance(base, TAdicField) and isinstance(base.coeff, FractionField):
        u = base.lift_residue(base.coeff.gen())
        out.extend([u, K.neg(u)])
    return out


def random_element(base: BaseField, rng, height: int = 3, allow_zero: bool = True):
    """Seeded random base element of bounded height (Laurent window in pi,
    small numerators)."""
    K = base.field
    if isinstance(base, PAdicField):
        while True:
            num = rng.randint(-(base.p**height), base.p**height)
            den = base.p ** rng.randint(0, height)
            x = Fraction(num, den)
            if allow_zero or x != 0:
                return x
    coeff = base.coeff
    while True:
        lo = -height
        coeffs = {}
        for j in range(lo, height + 1):
            if rng.random() < 0.5:
                continue
            coeffs[j] = _random_coeff(coeff, rng)
        if not coeffs:
            if allow_zero:
                return K.zero()
            continue
        shift = min(coeffs)
        poly = Poly(coeff, [coeffs.get(j, coeff.zero()) for j in range(shift, max(coeffs) + 1)])
        x = K.mul(K.from_poly(poly), base.uniformizer_power(shift))
        if allow_zero or not K.is_zero(x):
            return x


def _random_coeff(coeff: Field, rng):
    if isinstance(coeff, PrimeField):
        return rng.randrange(coeff.p)
    if isinstance(coeff, FractionField):
        inner = coeff.base
        num = Poly(inner, [_random_coeff(inner, rng) for _ in range(rng.randint(1, 2))])
        if num.is_zero:
            num = Poly.one(inner)
        den = Poly(inner, [_random_coeff(inner, rng) for _ in range(rng.randint(1, 2))])
        if den.is_zero:
            den = Poly.one(inner)
        return coeff.make(num, den)
    if coeff == QQ:
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    raise ValueError(f"no sampler for {coeff!r}")
