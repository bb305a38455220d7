"""Inductive valuations on K[x] over bases with finite residue field, and the
approximation loop enumerating the extensions of v to K[x]/(Q).

The loop follows MacLane's augmentation scheme in Newton-polygon form: a
branch carries a chain of completed augmentation levels (key polynomial,
assigned value, residual factor) plus a candidate key.  Each step expands Q in
the candidate, takes the principal sides of the expansion polygon (slopes
steeper than the candidate's current value), attaches to each side a residual
polynomial over the branch residue field, and splits on its irreducible
factors.  A factor of multiplicity one resolves the branch: the attached
extension is defectless with e = accumulated value-group denominator and
f = accumulated residue degree.  Multiplicity that refuses to drop is the
defect signature; since the cap cannot distinguish slow convergence from true
defect, such leaves are flagged suspected, never asserted.

Everything is computed on an integral normalization x -> x / pi^s (root values
made nonnegative, Gauss level 0); reported chains are mapped back to the
original coordinates, where the Gauss level carries -s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .basefield import BaseField
from .errors import NotSquareFree, ResidueFieldUnsupported
from .fields import ExtensionField, Poly, factor_monic_over_finite_field
from .newton import lower_hull, root_valuations
from .value import INFINITY, Value, vmin


# ---------------------------------------------------------------------------
# public chain type


@dataclass(frozen=True)
class AugmentedChain:
    """A Gauss level followed by augmentation steps (key polynomial, value)."""

    base: BaseField
    base_gamma: Value
    steps: tuple  # ((Poly, Value), ...)

    def __post_init__(self):
        last_deg = 1
        for key, lam in self.steps:
            if not key.is_monic:
                raise ValueError("chain keys must be monic")
            if key.degree < last_deg:
                raise ValueError("chain key degrees must weakly increase")
            last_deg = key.degree

    def as_json(self):
        from .fields import format_poly

        out = [{"gauss": self.base_gamma.as_pair()}]
        for key, lam in self.steps:
            out.append({"key": format_poly(key, "X", self.base.field.format), "value": lam.as_pair()})
        return out


def chain_eval(chain: AugmentedChain, f: Poly) -> Value:
    """Value of f under the chain: recursive key-expansion minima down to the
    Gauss level."""
    return _eval_steps(chain.base, chain.base_gamma, list(chain.steps), f)


def _eval_steps(base: BaseField, gamma0: Value, steps, f: Poly) -> Value:
    if f.is_zero:
        return INFINITY
    if not steps:
        return vmin(
            base.val(c) + gamma0 * i
            for i, c in enumerate(f.coeffs)
            if not base.field.is_zero(c)
        )
    key, lam = steps[-1]
    prev = steps[:-1]
    best = None
    for j, cj in enumerate(_expand(f, key)):
        if cj.is_zero:
            continue
        term = _eval_steps(base, gamma0, prev, cj) + lam * j
        if best is None or term < best:
            best = term
    return INFINITY if best is None else best


def _expand(f: Poly, phi: Poly):
    """phi-adic expansion coefficients, lowest first, each of degree < deg phi."""
    out = []
    rem = f
    if phi.degree == 0:
        raise ValueError("expansion by a constant")
    while not rem.is_zero:
        rem, c = rem.divmod(phi)
        out.append(c)
    return out or [Poly.zero(f.ring)]


# ---------------------------------------------------------------------------
# internal branch state (normalized coordinates)


@dataclass
class _Level:
    phi: Poly
    lam: Fraction
    e: int  # denominator of lam relative to the previous value group
    psi: Poly  # residual irreducible over the previous residue field
    z: object  # its root inside res_field
    res_field: object
    d: int  # cumulative value-group denominator
    ymono: tuple  # normalizer monomial (a, exps) of value e*lam over previous levels


@dataclass
class _Branch:
    psi0: Poly
    res0: object
    x0: object
    f0: int
    levels: list
    cand: Poly

    @property
    def d(self) -> int:
        return self.levels[-1].d if self.levels else 1

    @property
    def fdeg(self) -> int:
        f = self.f0
        for lv in self.levels:
            f *= lv.psi.degree
        return f

    def res_top(self):
        return self.levels[-1].res_field if self.levels else self.res0


class _Machine:
    """All level-aware arithmetic for one approximate() run."""

    def __init__(self, base: BaseField):
        self.base = base
        self.k0 = base.residue_field

    # -- chain values ----------------------------------------------------

    def mu(self, levels, f: Poly) -> Value:
        if f.is_zero:
            return INFINITY
        if not levels:
            return vmin(self.base.val(c) for c in f.coeffs if not self.base.field.is_zero(c))
        lv = levels[-1]
        best = None
        for j, cj in enumerate(_expand(f, lv.phi)):
            if cj.is_zero:
                continue
            term = self.mu(levels[:-1], cj) + Value(lv.lam) * j
            if best is None or term < best:
                best = term
        return INFINITY if best is None else best

    # -- normalizer monomials ---------------------------------------------

    def norm_monomial(self, levels, gamma: Fraction):
        """Exponents (a, (b_j)) with value(pi^a * prod phi_j^b_j) = gamma and
        0 <= b_j < e_j, found greedily from the top level down."""
        exps = [0] * len(levels)
        g = Fraction(gamma)
        for j in range(len(levels) - 1, -1, -1):
            lv = levels[j]
            d_prev = levels[j - 1].d if j else 1
            for b in range(lv.e):
                if ((g - b * lv.lam) * d_prev).denominator == 1:
                    exps[j] = b
                    g -= b * lv.lam
                    break
            else:
                raise ValueError(f"{gamma} not in the level-{len(levels)} value group")
        assert g.denominator == 1
        return (int(g), tuple(exps))

    def realize(self, levels, mono) -> Poly:
        a, exps = mono
        K = self.base.field
        out = Poly.const(K, self.base.uniformizer_power(a))
        for lv, b in zip(levels, exps):
            if b:
                out = out * lv.phi**b
        return out

    # -- graded reduction and lifting --------------------------------------

    def redfld(self, branch: _Branch, k: int, g: Poly):
        """Residue of a value-zero polynomial in the level-k residue field."""
        levels = branch.levels[:k]
        assert self.mu(levels, g) == Value(0), "reduction needs value exactly 0"
        if k == 0:
            R = branch.res0
            acc = R.zero()
            xpow = R.one()
            for c in g.coeffs:
                if not self.base.field.is_zero(c) and self.base.val(c) == Value(0):
                    r = self.base.residue(c)
                    acc = R.add(acc, R.mul(self._embed0(branch, r), xpow))
                xpow = R.mul(xpow, branch.x0)
            return acc
        lv = branch.levels[k - 1]
        R = lv.res_field
        prevR = branch.levels[k - 2].res_field if k >= 2 else branch.res0
        y = self.realize(levels[:-1], lv.ymono)
        acc = R.zero()
        ypow = Poly.one(self.base.field)
        zpow = R.one()
        for idx, cj in enumerate(_expand(g, lv.phi)):
            if idx % lv.e == 0:
                i = idx // lv.e
                if not cj.is_zero and self.mu(levels[:-1], cj) == Value(-lv.lam * idx):
                    c = self.redfld(branch, k - 1, cj * ypow)
                    acc = R.add(acc, R.mul(self._embed(prevR, R, c), zpow))
                ypow = ypow * y
                zpow = R.mul(zpow, lv.z)
        return acc

    def _embed0(self, branch: _Branch, r):
        if branch.res0 == self.k0:
            return r
        return branch.res0.embed(r)

    @staticmethod
    def _embed(src, dst, c):
        if src == dst:
            return c
        return dst.embed(c)

    def liftfld(self, branch: _Branch, k: int, s) -> Poly:
        """A value-zero polynomial reducing to s at level k."""
        if k == 0:
            R = branch.res0
            K = self.base.field
            if R == self.k0:
                return Poly.const(K, self.base.lift_residue(s))
            # s is a reduced representative over k0
            return Poly(K, [self.base.lift_residue(c) for c in s.coeffs])
        lv = branch.levels[k - 1]
        prevR = branch.levels[k - 2].res_field if k >= 2 else branch.res0
        if lv.res_field == prevR:
            # trivial residue step: z is a prev-field scalar; rewrite s in powers
            # of z is unnecessary, lift directly
            return self.liftfld(branch, k - 1, s)
        y = self.realize(branch.levels[: k - 1], lv.ymono)
        block = lv.phi**lv.e * y
        out = Poly.zero(self.base.field)
        blockpow = Poly.one(self.base.field)
        for c in s.coeffs:  # s: representative over prevR, degree < deg psi
            if not prevR.is_zero(c):
                out = out + self.liftfld(branch, k - 1, c) * blockpow
            blockpow = blockpow * block
        return out

    # -- side residuals and key lifting -------------------------------------

    def side_residual(self, branch: _Branch, expansion, j0: int, w0: Fraction, lam: Fraction, e: int, r: int) -> Poly:
        k = len(branch.levels)
        R = branch.res_top()
        X = self.realize(branch.levels, self.norm_monomial(branch.levels, -w0))
        Y = self.realize(branch.levels, self.norm_monomial(branch.levels, e * lam))
        coeffs = []
        ypow = Poly.one(self.base.field)
        for i in range(r + 1):
            j = j0 + i * e
            fj = expansion[j] if j < len(expansion) else Poly.zero(self.base.field)
            line = Value(w0 - i * e * lam)
            if fj.is_zero or self.mu(branch.levels, fj) != line:
                coeffs.append(R.zero())
            else:
                coeffs.append(self.redfld(branch, k, fj * X * ypow))
            ypow = ypow * Y
        res = Poly(R, coeffs)
        assert res.degree == r and not R.is_zero(res.coeff(0)), "side residual must have full degree and unit ends"
        return res

    def lift_key(self, branch: _Branch, lam: Fraction, e: int, psi: Poly) -> Poly:
        k = len(branch.levels)
        fpsi = psi.degree
        R = branch.res_top()
        Y = self.realize(branch.levels, self.norm_monomial(branch.levels, e * lam))
        new = branch.cand ** (e * fpsi)
        for i in range(fpsi):
            si = psi.coeff(i)
            if R.is_zero(si):
                continue
            term = self.liftfld(branch, k, si) * Y ** (fpsi - i) * branch.cand ** (i * e)
            new = new + term
        assert new.is_monic and new.degree == branch.cand.degree * e * fpsi
        return new


# ---------------------------------------------------------------------------
# public results


@dataclass
class MacLaneExtension:
    """One extension of v to K[x]/(Q): invariants plus the approximating chain
    in the original coordinates."""

    e: int
    f: int
    defectless: bool
    depth: Optional[int]
    chain: AugmentedChain
    terminal_key: Poly
    shift: int

    @property
    def defect_flag(self) -> str:
        return "defectless" if self.defectless else "defect-suspected"

    def value_of(self, g: Poly) -> Value:
        """w(g(a)) for deg g < deg(terminal key): the chain already computes it."""
        if g.degree >= self.terminal_key.degree:
            raise ValueError("chain value only certified below the terminal key degree")
        return chain_eval(self.chain, g)

    def as_dict(self):
        return {
            "e": self.e,
            "f": self.f,
            "depth": self.depth,
            "defect_flag": self.defect_flag,
            "chain": self.chain.as_json(),
        }


@dataclass
class MacLaneResult:
    extensions: list
    degree: int

    @property
    def extension_count(self) -> int:
        return len(self.extensions)

    @property
    def fully_resolved(self) -> bool:
        return all(ext.defectless for ext in self.extensions) and (
            sum(ext.e * ext.f for ext in self.extensions) == self.degree
        )


def approximate(base: BaseField, Q: Poly, max_iterations: int = 64) -> MacLaneResult:
    """All extensions of the base valuation to K[x]/(Q), Q monic square-free
    separable, over a base with finite residue field."""
    base.require_maclane()
    if Q.ring != base.field:
        raise ValueError("Q must be over the base field")
    if not Q.is_monic or Q.degree < 1:
        raise NotSquareFree("Q must be monic non-constant")
    dQ = Q.derivative()
    if dQ.is_zero:
        raise NotSquareFree("Q is inseparable (derivative vanishes); not supported by this loop")
    if Q.gcd(dQ).degree > 0:
        raise NotSquareFree("Q has repeated factors")

    # integral normalization x -> y/pi^s
    rv = root_valuations([base.val(c) for c in Q.coeffs])
    if rv.entries:
        rho_min = rv.entries[-1][0].finite
        shift = max(0, math.ceil(-rho_min))
    else:
        shift = 0
    K = base.field
    n = Q.degree
    Qn = Poly(K, [K.mul(c, base.uniformizer_power(shift * (n - i))) for i, c in enumerate(Q.coeffs)])

    machine = _Machine(base)
    k0 = base.residue_field
    qbar_coeffs = []
    for c in Qn.coeffs:
        if K.is_zero(c) or base.val(c) > Value(0):
            qbar_coeffs.append(k0.zero())
        else:
            qbar_coeffs.append(base.residue(c))
    Qbar = Poly(k0, qbar_coeffs)
    assert Qbar.degree == n

    leaves = []
    work = []
    for psi0, mult in factor_monic_over_finite_field(Qbar):
        if psi0.degree == 1:
            res0, x0 = k0, k0.neg(psi0.coeff(0))
        else:
            res0 = ExtensionField(k0, psi0, "x0")
            x0 = res0.gen()
        cand = Poly(K, [base.lift_residue(c) for c in psi0.coeffs[:-1]] + [K.one()])
        branch = _Branch(psi0=psi0, res0=res0, x0=x0, f0=psi0.degree, levels=[], cand=cand)
        if mult == 1:
            leaves.append(_leaf(base, branch, shift, defectless=True))
        else:
            work.append(branch)

    while work:
        branch = work.pop(0)
        if len(branch.levels) >= max_iterations:
            leaves.append(_leaf(base, branch, shift, defectless=False))
            continue
        V = machine.mu(branch.levels, branch.cand)
        expansion = _expand(Qn, branch.cand)
        pts = [
            (j, machine.mu(branch.levels, fj))
            for j, fj in enumerate(expansion)
            if not fj.is_zero
        ]
        if expansion[0].is_zero:
            # the candidate divides Q exactly: a resolved extension
            leaves.append(_leaf(base, branch, shift, defectless=True))
        hull = lower_hull(pts) if len(pts) >= 2 else None
        sides = list(hull.sides) if hull else []
        principal = [s for s in sides if Value(-s.slope) > V]
        assert principal or expansion[0].is_zero, "no improvement side found; chain is stuck"
        # walk sides steepest first; vertex indices recover j0 per side
        vert = {i: v for i, v in (hull.vertices if hull else ())}
        j0 = min(vert) if vert else 0
        for side in sides:
            lam = -side.slope
            if not (Value(lam) > V):
                j0 += side.horizontal_length
                continue
            w0 = vert[j0].finite
            d_prev = branch.d
            e_rel = (lam * d_prev).denominator
            length = side.horizontal_length
            assert length % e_rel == 0
            r = length // e_rel
            residual = machine.side_residual(branch, expansion, j0, w0, lam, e_rel, r)
            for psi, mult in factor_monic_over_finite_field(residual.monic()):
                z = psi.ring.neg(psi.coeff(0)) if psi.degree == 1 else None
                if psi.degree == 1:
                    new_res = branch.res_top()
                else:
                    new_res = ExtensionField(branch.res_top(), psi, f"z{len(branch.levels) + 1}")
                    z = new_res.gen()
                level = _Level(
                    phi=branch.cand,
                    lam=lam,
                    e=e_rel,
                    psi=psi,
                    z=z,
                    res_field=new_res,
                    d=d_prev * e_rel,
                    ymono=machine.norm_monomial(branch.levels, e_rel * lam),
                )
                # lift over the PARENT state: the residual lives there
                new_key = machine.lift_key(branch, lam, e_rel, psi)
                child = _Branch(
                    psi0=branch.psi0,
                    res0=branch.res0,
                    x0=branch.x0,
                    f0=branch.f0,
                    levels=branch.levels + [level],
                    cand=new_key,
                )
                if mult == 1:
                    leaves.append(_leaf(base, child, shift, defectless=True))
                else:
                    work.append(child)
            j0 += side.horizontal_length

    leaves.sort(key=lambda ext: (ext.e, ext.f, tuple(repr(c) for c in ext.terminal_key.coeffs)))
    result = MacLaneResult(extensions=leaves, degree=n)
    assert sum(ext.e * ext.f for ext in leaves if ext.defectless) <= n
    if all(ext.defectless for ext in leaves):
        assert sum(ext.e * ext.f for ext in leaves) == n, "resolved extensions must fill the degree"
    return result


def _leaf(base: BaseField, branch, shift: int, defectless: bool) -> MacLaneExtension:
    e = branch.d
    f = branch.f0
    for lv in branch.levels:
        f *= lv.psi.degree
    degs = [1] + [lv.phi.degree for lv in branch.levels] + [branch.cand.degree]
    depth = sum(1 for a, b in zip(degs, degs[1:]) if b > a) if defectless else None
    steps = tuple(
        (_unshift(lv.phi, base, shift), Value(lv.lam - shift * lv.phi.degree))
        for lv in branch.levels
    )
    chain = AugmentedChain(base=base, base_gamma=Value(-shift), steps=steps)
    return MacLaneExtension(
        e=e,
        f=f,
        defectless=defectless,
        depth=depth,
        chain=chain,
        terminal_key=_unshift(branch.cand, base, shift),
        shift=shift,
    )


def _unshift(phi: Poly, base: BaseField, s: int) -> Poly:
    """Map a key in normalized coordinates y = pi^s x back: pi^(-s m) phi(pi^s x)."""
    if s == 0:
        return phi
    K = base.field
    m = phi.degree
    return Poly(K, [K.mul(c, base.uniformizer_power(s * (i - m))) for i, c in enumerate(phi.coeffs)])


def depth_of(element) -> Optional[int]:
    """Okutsu depth of a tower element: strict degree jumps of its chain.
    None when not certified (defect suspected or unsupported residue field)."""
    tower = element.tower
    if not tower.base.maclane_supported:
        return tower.declarations.get("depth")
    m = element.min_poly()
    if m.degree == 1:
        return 0
    result = approximate(tower.base, m)
    if result.extension_count != 1 or not result.extensions[0].defectless:
        return None
    return result.extensions[0].depth
