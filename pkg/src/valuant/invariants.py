"""Distance profiles of conjugates, Krasner constants, j-invariants, divided
derivatives, epsilon/argmax reports, pair and truncated valuations, and the
abstract-key falsifier.

Everything about distances flows through one device: the roots of Q(X + a)/X
are exactly the differences a' - a over the conjugates a' of a, so the Newton
polygon of that shifted polynomial (coefficients valued in the tower) yields
the multiset {v(a - a')} without ever factoring anything.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .errors import (
    NoFiniteDerivativeValue,
    NotUnibranched,
    SupportPolynomial,
)
from .fields import Poly
from .newton import RootValuationMultiset, root_valuations
from .tower import TowerElement
from .value import INFINITY, Value, vmax, vmin


# ---------------------------------------------------------------------------
# distance profiles


@dataclass
class DistanceProfile:
    """The multiset {v(a - a')} over conjugates a' != a, with derived data."""

    element: TowerElement
    degree: int
    multiset: RootValuationMultiset
    s_set: tuple  # distinct distances, decreasing
    omega: Value  # Krasner constant: max of s_set
    value_of_a: Value
    min_poly: Poly

    @property
    def s_count(self) -> int:
        return len(self.s_set)

    def j_at(self, gamma: Value) -> int:
        """j of the minimal polynomial at threshold gamma: the element itself
        plus the conjugates at distance >= gamma."""
        return 1 + self.multiset.count_at_least(gamma)

    def as_json(self):
        return {
            "degree": self.degree,
            "multiset": self.multiset.as_json(),
            "S": [v.as_pair() for v in self.s_set],
            "omega": self.omega.as_pair(),
            "v_a": self.value_of_a.as_pair(),
        }


def conjugate_difference_values(a: TowerElement, f: Poly) -> RootValuationMultiset:
    """Root-value multiset of f(X + a): the values v(z - a) over the roots z
    of f, roots equal to a landing in the infinity bucket."""
    tower = a.tower
    tower.ensure_unibranched()
    shifted = _shift_base_poly_by_element(f, a)
    return root_valuations([c.val() for c in shifted])


def distances(a: TowerElement) -> DistanceProfile:
    """Distance profile of a separable tower element over the base."""
    a.tower.ensure_unibranched()
    a.require_separable()
    Q = a.min_poly()
    shifted = _shift_base_poly_by_element(Q, a)
    assert shifted[0].is_zero, "a must be a root of its minimal polynomial"
    multiset = root_valuations([c.val() for c in shifted[1:]])
    assert multiset.zero_root_multiplicity == 0, "separable: a is a simple root"
    assert multiset.total == Q.degree - 1
    s_set = multiset.support()
    assert 1 <= len(s_set) <= Q.degree - 1
    return DistanceProfile(
        element=a,
        degree=Q.degree,
        multiset=multiset,
        s_set=s_set,
        omega=s_set[0],
        value_of_a=a.val(),
        min_poly=Q,
    )


def _shift_base_poly_by_element(f: Poly, a: TowerElement) -> list:
    """Coefficients of f(X + a) as tower elements (lowest first)."""
    tower = a.tower
    coeffs = [tower.zero() for _ in range(f.degree + 1)]
    # Horner in (X + a): carry a polynomial in X with tower coefficients
    acc = []
    for c in reversed(f.coeffs):
        # acc <- acc * (X + a) + c
        new = [tower.zero() for _ in range(len(acc) + 1)]
        for i, q in enumerate(acc):
            new[i + 1] = new[i + 1] + q
            new[i] = new[i] + q * a
        new[0] = new[0] + tower.from_base(c)
        acc = new
    if not acc:
        acc = [tower.zero()]
    for i, q in enumerate(acc):
        coeffs[i] = q
    return coeffs


def j_invariant(f: Poly, a: TowerElement, gamma: Value) -> int:
    """Number of roots z of f (with multiplicity) with v(a - z) >= gamma;
    roots equal to a always count."""
    multiset = conjugate_difference_values(a, f)
    return multiset.count_at_least(gamma)


# ---------------------------------------------------------------------------
# divided derivatives


def hasse_schmidt(f: Poly, s: int) -> Poly:
    """s-th divided-power derivative, exact in characteristic p."""
    return f.hasse_derivative(s)


# ---------------------------------------------------------------------------
# polynomial valuations


class PolyValuation:
    """A valuation (or pseudo-valuation) on K[x], evaluated exactly on base
    polynomials.  Kinds: point v(f(a)); pair v_{a,gamma}; gauss (pair at 0);
    truncation by a monic q; an inductive chain."""

    def __init__(self, kind: str, **data):
        self.kind = kind
        self.data = data

    # -- constructors ------------------------------------------------------

    @staticmethod
    def point(a: TowerElement) -> "PolyValuation":
        return PolyValuation("point", a=a)

    @staticmethod
    def pair(a: TowerElement, gamma: Value) -> "PolyValuation":
        return PolyValuation("pair", a=a, gamma=gamma)

    @staticmethod
    def gauss(base, gamma: Value) -> "PolyValuation":
        return PolyValuation("gauss", base=base, gamma=gamma)

    @staticmethod
    def truncation(q: Poly, inner: "PolyValuation") -> "PolyValuation":
        if not q.is_monic or q.degree < 1:
            raise ValueError("truncation needs a monic non-constant q")
        return PolyValuation("truncation", q=q, inner=inner)

    @staticmethod
    def chain(chain) -> "PolyValuation":
        return PolyValuation("chain", chain=chain)

    # -- evaluation ---------------------------------------------------------

    def value(self, f: Poly) -> Value:
        if self.kind == "point":
            a = self.data["a"]
            if f.is_zero:
                return INFINITY
            return a.tower.eval_base_poly(f, a).val()
        if self.kind == "pair":
            return pair_valuation_eval(self.data["a"], self.data["gamma"], f)
        if self.kind == "gauss":
            base = self.data["base"]
            gamma = self.data["gamma"]
            if f.is_zero:
                return INFINITY
            return vmin(
                (base.val(c) + gamma * i) if i else base.val(c)
                for i, c in enumerate(f.coeffs)
                if not base.field.is_zero(c)
            )
        if self.kind == "truncation":
            return truncation_eval(self.data["q"], self.data["inner"], f)
        if self.kind == "chain":
            from .maclane import chain_eval

            return chain_eval(self.data["chain"], f)
        raise ValueError(f"unknown valuation kind {self.kind}")

    def __repr__(self):
        return f"PolyValuation({self.kind})"


def pair_valuation_eval(a: TowerElement, gamma: Value, f: Poly) -> Value:
    """v_{a,gamma}(f) = v(lc f) + sum over roots z of f of min(gamma, v(a-z));
    roots equal to a contribute gamma."""
    tower = a.tower
    tower.ensure_unibranched()
    if f.is_zero:
        return INFINITY
    if f.degree == 0:
        return tower.base.val(f.coeffs[0])
    multiset = conjugate_difference_values(a, f)
    total = tower.base.val(f.lc)
    if multiset.zero_root_multiplicity:
        total = total + gamma * multiset.zero_root_multiplicity
    for v, m in multiset.entries:
        total = total + vmin([gamma, v]) * m
    return total


def truncation_eval(q: Poly, mu: PolyValuation, f: Poly) -> Value:
    """mu_q(f) = min over the q-expansion f = sum f_i q^i of mu(f_i) + i*mu(q)."""
    if f.is_zero:
        return INFINITY
    vq = mu.value(q)
    best = None
    i = 0
    rem = f
    while not rem.is_zero:
        rem, c = rem.divmod(q)
        if not c.is_zero:
            vc = mu.value(c)
            term = vc + vq * i if i else vc
            if best is None or term < best:
                best = term
        i += 1
    return INFINITY if best is None else best


# ---------------------------------------------------------------------------
# epsilon / argmax reports


@dataclass
class EpsilonReport:
    """max_s (mu(f) - mu(d_s f))/s with its argmax set and b = min argmax."""

    epsilon: Value
    argmax_set: tuple  # increasing
    b: int
    per_s: tuple  # (s, mu(d_s f), quotient or None)
    mu_f: Value
    root_contact: Optional[Value]  # independent cross-check when roots are accessible
    root_contact_verified: Optional[bool]

    def as_json(self):
        return {
            "epsilon": self.epsilon.as_pair(),
            "I": list(self.argmax_set),
            "b": self.b,
            "mu_f": self.mu_f.as_pair(),
            "cross_check": self.root_contact_verified,
        }


def epsilon_report(mu: PolyValuation, f: Poly, cross_check: bool = True) -> EpsilonReport:
    """Derivative-drop report of f under mu.  Orders s with mu(d_s f) infinite
    are skipped; if every order is infinite the report is refused."""
    if f.degree < 1:
        raise ValueError("f must be non-constant")
    mu_f = mu.value(f)
    if mu_f.is_infinite:
        raise SupportPolynomial("mu(f) is infinite: f lies in the support of mu")
    per_s = []
    best = None
    for s in range(1, f.degree + 1):
        ds = f.hasse_derivative(s)
        if ds.is_zero:
            per_s.append((s, INFINITY, None))
            continue
        v = mu.value(ds)
        if v.is_infinite:
            per_s.append((s, v, None))
            continue
        from fractions import Fraction

        quotient = (mu_f - v) * Fraction(1, s)
        per_s.append((s, v, quotient))
        if best is None or best < quotient:
            best = quotient
    if best is None:
        raise NoFiniteDerivativeValue("every derivative order has infinite value")
    argmax = tuple(s for s, _, q in per_s if q is not None and q == best)
    contact = None
    verified = None
    if cross_check:
        contact = _max_root_contact(mu, f)
        if contact is not None:
            verified = contact == best
    return EpsilonReport(
        epsilon=best,
        argmax_set=argmax,
        b=argmax[0],
        per_s=tuple(per_s),
        mu_f=mu_f,
        root_contact=contact,
        root_contact_verified=verified,
    )


def _max_root_contact(mu: PolyValuation, f: Poly) -> Optional[Value]:
    """max over roots z of f of mu-extension(x - z), computable for point and
    pair valuations (gauss included) through the conjugate multiset."""
    if mu.kind == "gauss":
        base = mu.data["base"]
        gamma = mu.data["gamma"]
        rv = root_valuations([base.val(c) for c in f.coeffs])
        candidates = [gamma] if rv.zero_root_multiplicity else []
        candidates += [vmin([gamma, v]) for v, _ in rv.entries]
        return vmax(candidates) if candidates else None
    if mu.kind in ("point", "pair"):
        a = mu.data["a"]
        gamma = mu.data.get("gamma", INFINITY)
        multiset = conjugate_difference_values(a, f)
        candidates = [gamma] if multiset.zero_root_multiplicity else []
        candidates += [vmin([gamma, v]) for v, _ in multiset.entries]
        return vmax(candidates) if candidates else None
    return None


# ---------------------------------------------------------------------------
# abstract key falsifier


@dataclass
class KeyCheckResult:
    certified: bool
    trials: int
    witness: Optional[Poly]

    def as_json(self):
        from .fields import format_poly

        return {
            "certified": self.certified,
            "trials": self.trials,
            "witness": None if self.witness is None else format_poly(self.witness, "X"),
        }


def abstract_key_check(
    q: Poly,
    mu: PolyValuation,
    base,
    trials: int = 0,
    seed: int = 0,
    sample=None,
    exhaustive_cap: int = 20000,
) -> KeyCheckResult:
    """Falsifier for the key property: deg f < deg q implies eps(f) < eps(q).

    Exhausts monic f over the declared sample set (up to the cap) plus seeded
    random trials; returns the first counterexample as a witness.  This is a
    falsifier, not a decision procedure: the property quantifies over all of
    K[x]."""
    from .basefield import random_element, standard_sample

    if not q.is_monic:
        raise ValueError("q must be monic")
    eps_q = epsilon_report(mu, q, cross_check=False).epsilon
    sample = list(sample) if sample is not None else standard_sample(base)
    count = 0

    def check(f: Poly) -> Optional[Poly]:
        nonlocal count
        if f.degree < 1:
            return None
        count += 1
        try:
            eps_f = epsilon_report(mu, f, cross_check=False).epsilon
        except (SupportPolynomial, NoFiniteDerivativeValue):
            return None
        if not (eps_f < eps_q):
            return f
        return None

    for deg in range(1, q.degree):
        if len(sample) ** deg <= exhaustive_cap:
            for tails in itertools.product(sample, repeat=deg):
                f = Poly(base.field, list(tails) + [base.field.one()])
                w = check(f)
                if w is not None:
                    return KeyCheckResult(False, count, w)
        else:
            rng = random.Random(seed ^ deg)
            for _ in range(exhaustive_cap // max(1, q.degree)):
                f = Poly(base.field, [rng.choice(sample) for _ in range(deg)] + [base.field.one()])
                w = check(f)
                if w is not None:
                    return KeyCheckResult(False, count, w)
    rng = random.Random(seed)
    for _ in range(trials):
        deg = rng.randrange(1, q.degree) if q.degree > 1 else 0
        if deg == 0:
            break
        f = Poly(
            base.field,
            [random_element(base, rng) for _ in range(deg)] + [base.field.one()],
        )
        w = check(f)
        if w is not None:
            return KeyCheckResult(False, count, w)
    return KeyCheckResult(True, count, None)


# ---------------------------------------------------------------------------
# Krasner-style falsifier


def krasner_degree_check(profile: DistanceProfile, perturbations) -> bool:
    """For b = a + c with v(c) > omega, K(a) embeds into K(b): mechanically,
    deg(b) must be >= deg(a).  Checks the given tower elements c."""
    a = profile.element
    for c in perturbations:
        vc = c.val()
        if not (profile.omega < vc):
            continue
        b = a + c
        if b.min_poly().degree < profile.degree:
            return False
    return True
