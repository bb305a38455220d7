"""Coefficient rings and fields: Q, F_p, rational function fields, and simple
algebraic extensions.

Field objects own the arithmetic; element values are plain immutable Python
data kept in canonical form (ints mod p, Fraction, reduced numerator/denominator
pairs with monic denominator, reduced polynomial representatives), so ``==``
and ``hash`` are structural.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .errors import DivisionByZero, FieldMismatch, ReducibleMinimalPolynomial
from .poly import Poly, poly_pth_root


class Ring:
    """Minimal coefficient protocol used by Poly and the resultant PRS."""

    char = 0

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc, base = self.one(), a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def exact_div(self, a, b):
        raise NotImplementedError

    def pth_root(self, a):
        """Inverse Frobenius where it exists, else None."""
        return None

    def format(self, a) -> str:
        return str(a)


class Field(Ring):
    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def exact_div(self, a, b):
        return self.div(a, b)


class RationalField(Field):
    """Q with Fraction elements."""

    char = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("1/0 in Q")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class PrimeField(Field):
    """F_p with int elements in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"1/0 in F_{self.p}")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def pth_root(self, a):
        return a % self.p  # Frobenius is the identity on F_p

    def elements(self):
        return range(self.p)

    def size(self):
        return self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class FractionField(Field):
    """Rational functions base(var): elements are (num, den) Poly pairs, reduced,
    with monic denominator."""

    def __init__(self, base: Field, var: str):
        self.base = base
        self.var = var
        self.char = base.char

    def make(self, num: Poly, den: Poly):
        if den.is_zero:
            raise DivisionByZero(f"zero denominator in {self!r}")
        if num.is_zero:
            return (Poly.zero(self.base), Poly.one(self.base))
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        c = self.base.inv(den.lc)
        return (num.scale(c), den.scale(c))

    def from_poly(self, num: Poly):
        return (num, Poly.one(self.base))

    def gen(self):
        return (Poly.x(self.base), Poly.one(self.base))

    def zero(self):
        return (Poly.zero(self.base), Poly.one(self.base))

    def one(self):
        return (Poly.one(self.base), Poly.one(self.base))

    def add(self, a, b):
        return self.make(a[0] * b[1] + b[0] * a[1], a[1] * b[1])

    def neg(self, a):
        return (-a[0], a[1])

    def sub(self, a, b):
        return self.make(a[0] * b[1] - b[0] * a[1], a[1] * b[1])

    def mul(self, a, b):
        return self.make(a[0] * b[0], a[1] * b[1])

    def inv(self, a):
        return self.make(a[1], a[0])

    def is_zero(self, a):
        return a[0].is_zero

    def from_int(self, n):
        return (Poly.from_ints(self.base, [n]), Poly.one(self.base))

    def pth_root(self, a):
        p = self.char
        if p == 0:
            return None
        num, den = a
        # a = num*den^(p-1) / den^p, so a root needs the p-th root of num*den^(p-1)
        target = num * den ** (p - 1)
        root = poly_pth_root(target)
        if root is None:
            return None
        return self.make(root, den)

    def format(self, a) -> str:
        num = format_poly(a[0], self.var)
        if a[1].degree == 0 and a[1].coeffs and a[1].coeffs[0] == self.base.one():
            return num
        return f"({num})/({format_poly(a[1], self.var)})"

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.base == self.base and other.var == self.var

    def __hash__(self):
        return hash(("Frac", self.base, self.var))

    def __repr__(self):
        return f"{self.base!r}({self.var})"


class ExtensionField(Field):
    """base[y]/(modulus): elements are reduced Poly representatives over base.

    The modulus is assumed irreducible; this is not checked at construction
    (checking would need factorization over the base).  A reducible modulus is
    detected lazily when inversion meets a zero divisor.
    """

    def __init__(self, base: Field, modulus: Poly, name: str):
        if not modulus.is_monic or modulus.degree < 1:
            raise ValueError("modulus must be monic non-constant")
        self.base = base
        self.modulus = modulus
        self.name = name
        self.char = base.char
        self.degree = modulus.degree

    def make(self, rep: Poly):
        if rep.degree >= self.degree:
            rep = rep % self.modulus
        return rep

    def gen(self):
        return self.make(Poly.x(self.base))

    def embed(self, c):
        return Poly.const(self.base, c)

    def zero(self):
        return Poly.zero(self.base)

    def one(self):
        return Poly.one(self.base)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return self.make(a * b)

    def inv(self, a):
        if a.is_zero:
            raise DivisionByZero(f"1/0 in {self!r}")
        # extended euclid against the modulus
        r0, r1 = self.modulus, a
        s0, s1 = Poly.zero(self.base), Poly.one(self.base)
        while not r1.is_zero:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ReducibleMinimalPolynomial(
                f"zero divisor in {self!r}: gcd with modulus has degree {r0.degree}"
            )
        return self.make(s0.scale(self.base.inv(r0.coeffs[0])))

    def is_zero(self, a):
        return a.is_zero

    def from_int(self, n):
        return Poly.from_ints(self.base, [n])

    def pth_root(self, a):
        p = self.char
        if p == 0:
            return None
        sz = self.size()
        if sz is None:
            return None
        # finite fields are perfect: x -> x^p is a bijection of order dividing m
        root = a
        q = sz // p
        root = self.pow(a, q)
        return root if self.pow(root, p) == a else None

    def size(self):
        if isinstance(self.base, PrimeField):
            return self.base.p**self.degree
        if isinstance(self.base, ExtensionField):
            b = self.base.size()
            return None if b is None else b**self.degree
        return None

    def elements(self):
        base_elems = list(self.base.elements())
        for tup in product(base_elems, repeat=self.degree):
            yield Poly(self.base, tup)

    def format(self, a) -> str:
        return format_poly(a, self.name, coeff_format=self.base.format)

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("Ext", self.base, self.modulus.coeffs))

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/({format_poly(self.modulus, self.name)})"


class PolyDomain(Ring):
    """Polynomials over a field viewed as a coefficient domain (for bivariate
    resultants).  Element values are Poly objects over .field."""

    def __init__(self, field: Field, var: str = "X"):
        self.field = field
        self.var = var
        self.char = field.char

    def zero(self):
        return Poly.zero(self.field)

    def one(self):
        return Poly.one(self.field)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero

    def from_int(self, n):
        return Poly.from_ints(self.field, [n])

    def exact_div(self, a, b):
        return a.exact_div(b)

    def __eq__(self, other):
        return isinstance(other, PolyDomain) and other.field == self.field

    def __hash__(self):
        return hash(("PolyDomain", self.field))

    def __repr__(self):
        return f"{self.field!r}[{self.var}]"


def format_poly(f: Poly, var: str, coeff_format=None) -> str:
    """Human form, highest degree first: e.g. ``X^3 - X - 1/t``."""
    if f.is_zero:
        return "0"
    fmt = coeff_format or f.ring.format
    one = f.ring.one()
    parts = []
    for i in range(f.degree, -1, -1):
        c = f.coeff(i)
        if f.ring.is_zero(c):
            continue
        if i == 0:
            term = fmt(c)
        else:
            xi = var if i == 1 else f"{var}^{i}"
            if c == one:
                term = xi
            else:
                cs = fmt(c)
                if any(op in cs[1:] for op in "+-") and not (cs.startswith("(") and cs.endswith(")")):
                    cs = f"({cs})"
                term = f"{cs}*{xi}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-") and not term.startswith("(-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


def factor_monic_over_finite_field(f: Poly, size_cap: int = 200_000):
    """Factor a monic polynomial over a finite field by brute-force trial
    division, returning [(irreducible monic factor, multiplicity)] sorted
    deterministically.  Desk scale only: enumerates candidate divisors."""
    field = f.ring
    if not hasattr(field, "elements"):
        raise FieldMismatch("factorization needs an enumerable finite field")
    factors = []
    rem = f.monic()
    d = 1
    while rem.degree > 0:
        if d > rem.degree // 2:
            factors.append((rem, 1))
            break
        sz = field.size() if hasattr(field, "size") else None
        if sz is not None and sz**d > size_cap:
            raise FieldMismatch(
                f"finite-field factorization cap exceeded: {sz}^{d} candidates"
            )
        found = None
        for tup in product(list(field.elements()), repeat=d):
            cand = Poly(field, list(tup) + [field.one()])
            q, r = rem.divmod(cand)
            if r.is_zero:
                found = cand
                break
        if found is None:
            d += 1
            continue
        mult = 0
        while True:
            q, r = rem.divmod(found)
            if not r.is_zero:
                break
            rem = q
            mult += 1
        factors.append((found, mult))
    factors.sort(key=lambda fm: (fm[0].degree, _poly_sort_key(fm[0])))
    return factors


def _poly_sort_key(f: Poly):
    return tuple(repr(c) for c in f.coeffs)
