"""Dense univariate polynomials over an arbitrary coefficient ring.

Coefficients are stored lowest degree first with no trailing zeros, so equal
polynomials compare equal structurally.  The coefficient ring is any object
implementing the small protocol in ``fields.py`` (zero/one/add/mul/...); for
resultants only exact division is required of it, so the same code runs over
fields and over polynomial coefficient domains.
"""

from __future__ import annotations

import math

from .errors import DivisionByZeroPoly, FieldMismatch


class Poly:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        cs = list(coeffs)
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(ring) -> "Poly":
        return Poly(ring, ())

    @staticmethod
    def one(ring) -> "Poly":
        return Poly(ring, (ring.one(),))

    @staticmethod
    def x(ring) -> "Poly":
        return Poly(ring, (ring.zero(), ring.one()))

    @staticmethod
    def const(ring, c) -> "Poly":
        return Poly(ring, (c,))

    @staticmethod
    def from_ints(ring, ints) -> "Poly":
        return Poly(ring, [ring.from_int(n) for n in ints])

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise DivisionByZeroPoly("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one()

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero()

    def _check(self, other: "Poly"):
        if self.ring != other.ring:
            raise FieldMismatch(f"polynomials over different rings: {self.ring} vs {other.ring}")

    # -- ring operations -----------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(R, [R.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "Poly":
        R = self.ring
        return Poly(R, [R.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        R = self.ring
        if self.is_zero or other.is_zero:
            return Poly.zero(R)
        out = [R.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if R.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = R.add(out[i + j], R.mul(a, b))
        return Poly(R, out)

    def scale(self, c) -> "Poly":
        R = self.ring
        return Poly(R, [R.mul(c, a) for a in self.coeffs])

    def shift_up(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Poly(self.ring, (self.ring.zero(),) * k + self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Poly) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    # -- euclidean operations (field coefficients, or monic divisor) ----

    def divmod(self, other: "Poly"):
        """Quotient and remainder; divisor must be nonzero with invertible lc."""
        self._check(other)
        R = self.ring
        if other.is_zero:
            raise DivisionByZeroPoly("polynomial division by zero")
        inv_lc = R.inv(other.lc)
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(R), self
        quot = [R.zero()] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree]
            if R.is_zero(c):
                continue
            q = R.mul(c, inv_lc)
            quot[k] = q
            for j, b in enumerate(other.coeffs):
                rem[k + j] = R.sub(rem[k + j], R.mul(q, b))
        return Poly(R, quot), Poly(R, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise DivisionByZeroPoly("division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(self.ring.inv(self.lc))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd over a field."""
        self._check(other)
        a, b = self, other
        if a.is_zero and b.is_zero:
            raise DivisionByZeroPoly("gcd(0, 0) undefined")
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    # -- calculus ------------------------------------------------------

    def derivative(self) -> "Poly":
        R = self.ring
        return Poly(R, [R.mul(R.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def hasse_derivative(self, s: int) -> "Poly":
        """s-th divided-power derivative: coefficient of y^s in f(x+y); char-p safe."""
        if s < 0:
            raise ValueError("negative derivative order")
        R = self.ring
        out = []
        for k in range(s, len(self.coeffs)):
            out.append(R.mul(R.from_int(math.comb(k, s)), self.coeffs[k]))
        return Poly(R, out)

    def evaluate(self, x):
        """Horner evaluation at a ring element."""
        R = self.ring
        acc = R.zero()
        for c in reversed(self.coeffs):
            acc = R.add(R.mul(acc, x), c)
        return acc

    def map_coeffs(self, target_ring, fn) -> "Poly":
        return Poly(target_ring, [fn(c) for c in self.coeffs])

    def taylor_shift(self, c) -> "Poly":
        """Return f(x + c), computed by Horner in (x + c); exact in any characteristic."""
        R = self.ring
        xc = Poly(R, (c, R.one()))
        acc = Poly.zero(R)
        for a in reversed(self.coeffs):
            acc = acc * xc + Poly.const(R, a)
        return acc

    def compose(self, g: "Poly") -> "Poly":
        acc = Poly.zero(self.ring)
        for a in reversed(self.coeffs):
            acc = acc * g + Poly.const(self.ring, a)
        return acc


def poly_arith(lhs: Poly, rhs: Poly, op: str):
    """Dispatcher over {add, sub, mul, divmod, gcd}."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "divmod":
        return lhs.divmod(rhs)
    if op == "gcd":
        return lhs.gcd(rhs)
    raise ValueError(f"unknown op {op!r}")


def _prem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r with deg r < deg b."""
    R = a.ring
    d = a.degree - b.degree
    lb = b.lc
    rem = a
    for k in range(d, -1, -1):
        if rem.degree < b.degree + k:
            rem = rem.scale(lb)
            continue
        c = rem.coeff(b.degree + k)
        rem = rem.scale(lb) - b.scale(c).shift_up(k)
    return rem


def resultant(f: Poly, g: Poly):
    """Res(f, g) with the convention Res(f, g) = lc(f)^deg(g) * prod g(alpha_i)
    over the roots alpha_i of f.

    Fraction-free subresultant PRS: coefficient ring only needs exact division,
    so this runs over fields and over polynomial coefficient domains alike.
    """
    f._check(g)
    R = f.ring
    if f.is_zero or g.is_zero:
        return R.zero()
    if f.degree == 0:
        return R.pow(f.coeffs[0], g.degree)
    if g.degree == 0:
        return R.pow(g.coeffs[0], f.degree)
    s = 1
    a, b = f, g
    if a.degree < b.degree:
        if (a.degree % 2) and (b.degree % 2):
            s = -s
        a, b = b, a
    gg = R.one()
    h = R.one()
    while True:
        delta = a.degree - b.degree
        if (a.degree % 2) and (b.degree % 2):
            s = -s
        r = _prem(a, b)
        a, b = b, r
        if b.is_zero:
            return R.zero()
        denom = R.mul(gg, R.pow(h, delta))
        b = Poly(R, [R.exact_div(c, denom) for c in b.coeffs])
        gg = a.lc
        if delta > 0:
            h = R.exact_div(R.pow(gg, delta), R.pow(h, delta - 1))
        elif delta == 0:
            pass  # h unchanged
        if b.degree == 0:
            da = a.degree
            h = R.exact_div(R.pow(b.coeffs[0], da), R.pow(h, da - 1)) if da > 1 else (
                b.coeffs[0] if da == 1 else h
            )
            res = h
            if s < 0:
                res = R.neg(res)
            return res


def squarefree_radical(f: Poly) -> Poly:
    """The monic radical of f = m^k with m irreducible over a field.

    In characteristic p the power k and the inseparability layers of m both
    flatten derivatives to zero, so the extraction peels p-power substitution
    layers first and un-Frobeniuses coefficients back as deep as the field
    allows; the shallowest consistent layer is the irreducible one.
    """
    R = f.ring
    if f.is_zero or f.degree == 0:
        raise DivisionByZeroPoly("radical of a constant")
    p = R.char
    if p == 0:
        d = f.derivative()
        g = f.gcd(d)
        return f.exact_div(g).monic()
    # strip maximal x -> x^(p^r) substitution depth
    r = 0
    curr = f
    while True:
        if any(i % p and not R.is_zero(c) for i, c in enumerate(curr.coeffs)):
            break
        curr = Poly(R, [curr.coeff(i * p) for i in range(curr.degree // p + 1)])
        r += 1
    d = curr.derivative()
    if d.is_zero:
        raise DivisionByZeroPoly("radical extraction failed: derivative vanished after stripping")
    sep = curr.exact_div(curr.gcd(d)).monic()
    # sep = Frob^e(M) for the separable part M of the irreducible factor; find the
    # smallest s with p^(r-s)-th coefficient roots available, i.e. the largest
    # un-Frobenius depth. That candidate is the irreducible one.
    for s in range(r + 1):
        depth = r - s
        cand = sep
        ok = True
        for _ in range(depth):
            roots = [R.pth_root(c) for c in cand.coeffs]
            if any(x is None for x in roots):
                ok = False
                break
            cand = Poly(R, roots)
        if ok:
            q = p**s
            out = [R.zero()] * (cand.degree * q + 1)
            for i, c in enumerate(cand.coeffs):
                out[i * q] = c
            return Poly(R, out)
    raise DivisionByZeroPoly("radical extraction failed")


def poly_pth_root(f: Poly):
    """Return g with g^p = f, or None. Requires char p > 0."""
    R = f.ring
    p = R.char
    if p == 0:
        return None
    if f.is_zero:
        return f
    if any(i % p and not R.is_zero(c) for i, c in enumerate(f.coeffs)):
        return None
    roots = [R.pth_root(f.coeff(i * p)) for i in range(f.degree // p + 1)]
    if any(x is None for x in roots):
        return None
    return Poly(R, roots)
