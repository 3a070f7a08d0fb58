"""Disjoint groups whose projections may share values.

The quantity of interest is the size of the shared part of the two group
projections.  Probabilities come from the auxiliary counts ``A_v`` (the
coefficient of z1^n1 z2^n2 in (1 + phi(z1) + phi(z2))^(d_y - v) *
(1 + phi(z1 + z2))^v) combined by inclusion-exclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ProfileError
from .exactmath import DomainSpec, ExactProb, alpha, big_binomial, big_multinomial

__all__ = [
    "IntersectionQuery",
    "rho_groups_m2",
    "coefficient_A",
    "intersection_numerator",
    "prob_intersection_eq",
    "prob_intersection_at_most",
    "bracket_sum",
    "bracket_closed_form",
]


@dataclass(frozen=True)
class IntersectionQuery:
    """Group sizes plus either an exact intersection size ``u`` or a bound ``t``."""

    n1: int
    n2: int
    spec: DomainSpec
    u: int | None = None
    t: int | None = None

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ProfileError("group sizes must be >= 1")
        if (self.u is None) == (self.t is None):
            raise ProfileError("give exactly one of u (exact size) or t (upper bound)")
        d_y = self.spec.d_y
        if self.u is not None and not 0 <= self.u <= min(self.n1, self.n2, d_y):
            raise ProfileError(f"u = {self.u} outside [0, min(n1, n2, d_y)]")
        if self.t is not None and not 0 <= self.t <= d_y:
            raise ProfileError(f"t = {self.t} outside [0, d_y]")


def rho_groups_m2(n1: int, n2: int, spec: DomainSpec) -> int:
    """All ways to pick disjoint groups of sizes n1, n2 from the full domain."""
    if n1 < 1 or n2 < 1:
        raise ProfileError("group sizes must be >= 1")
    return big_multinomial(spec.d_x, n1, n2)


@lru_cache(maxsize=1024)
def _coefficient_A_clamped(n1: int, n2: int, v: int, spec: DomainSpec) -> int:
    d_y, d_z = spec.d_y, spec.d_z
    vd = v * d_z
    total = 0
    c_k = 1  # C(d_y - v, k)
    for k in range(0, min(d_y - v, n1) + 1):
        if k:
            c_k = c_k * (d_y - v - k + 1) // k
        top_l = min(vd, n1 - k, d_z * (d_y - k) - n2)
        if top_l < 0:
            continue
        m = d_z * (d_y - k)
        c_l = 1  # C(v d_z, l)
        c_n2 = big_binomial(m, n2)  # C(m - l, n2), stepped down with l
        inner = 0
        for l in range(0, top_l + 1):
            if l:
                c_l = c_l * (vd - l + 1) // l
                # C(m-l, n2) = C(m-l+1, n2) * (m-l+1-n2) / (m-l+1)
                c_n2 = c_n2 * (m - l + 1 - n2) // (m - l + 1)
            a = alpha(k, n1 - l, spec)
            if a:
                inner += c_l * c_n2 * a
        total += c_k * inner
    return total


def _coefficient_A_unclamped(n1: int, n2: int, v: int, spec: DomainSpec) -> int:
    """Reference double sum over the a-priori index ranges (tiny domains only)."""
    d_y, d_z = spec.d_y, spec.d_z
    total = 0
    for k in range(0, d_y - v + 1):
        for l in range(0, v * d_z + 1):
            if l > n1:
                continue
            top = d_z * (d_y - k) - l
            total += (
                big_binomial(d_y - v, k)
                * big_binomial(v * d_z, l)
                * (big_binomial(top, n2) if top >= 0 else 0)
                * alpha(k, n1 - l, spec)
            )
    return total


def coefficient_A(n1: int, n2: int, v: int, spec: DomainSpec, *, clamp: bool = True) -> int:
    """The auxiliary count A_{n1,n2;v}.

    With ``clamp=False`` the double sum runs over the unreduced index
    ranges; this is only for differential testing on tiny domains.
    """
    if not 0 <= v <= spec.d_y:
        raise ProfileError(f"v = {v} outside [0, d_y = {spec.d_y}]")
    if n1 < 0 or n2 < 0:
        raise ProfileError("group sizes must be >= 0")
    if clamp:
        return _coefficient_A_clamped(n1, n2, v, spec)
    return _coefficient_A_unclamped(n1, n2, v, spec)


def intersection_numerator(n1: int, n2: int, u: int, spec: DomainSpec) -> int:
    """Number of instances whose projections share exactly u values."""
    total = 0
    c = 1  # C(u, v)
    for v in range(0, u + 1):
        if v:
            c = c * (u - v + 1) // v
        term = c * coefficient_A(n1, n2, v, spec)
        total += -term if (u - v) & 1 else term
    total *= big_binomial(spec.d_y, u)
    if total < 0:
        raise AssertionError(f"negative intersection count for u={u} - arithmetic bug")
    return total


def prob_intersection_eq(q: IntersectionQuery) -> ExactProb:
    """Pr(|pi(G1) & pi(G2)| = u / n1, n2)."""
    if q.u is None:
        raise ProfileError("query needs an exact size u")
    num = intersection_numerator(q.n1, q.n2, q.u, q.spec)
    return ExactProb.from_counts(num, rho_groups_m2(q.n1, q.n2, q.spec))


def bracket_sum(d_y: int, v: int, t: int) -> int:
    """sum_{u=v..t} (-1)^(u-v) C(d_y, u) C(u, v), evaluated term by term."""
    return sum((-1) ** (u - v) * big_binomial(d_y, u) * big_binomial(u, v) for u in range(v, t + 1))


def bracket_closed_form(d_y: int, v: int, t: int) -> int:
    """Closed form (-1)^(t-v) C(d_y, v) C(d_y - v - 1, t - v), for t < d_y."""
    sign = -1 if (t - v) & 1 else 1
    return sign * big_binomial(d_y, v) * big_binomial(d_y - v - 1, t - v)


def prob_intersection_at_most(q: IntersectionQuery) -> ExactProb:
    """Pr(|pi(G1) & pi(G2)| <= t / n1, n2)."""
    if q.t is None:
        raise ProfileError("query needs an upper bound t")
    spec, d_y = q.spec, q.spec.d_y
    denominator = rho_groups_m2(q.n1, q.n2, spec)
    if q.t >= d_y:
        return ExactProb.from_counts(denominator, denominator)
    num = sum(
        bracket_closed_form(d_y, v, q.t) * coefficient_A(q.n1, q.n2, v, spec)
        for v in range(0, q.t + 1)
    )
    if num < 0:
        raise AssertionError("negative cumulative intersection count - arithmetic bug")
    return ExactProb.from_counts(num, denominator)
