"""Instance counts and conditional probabilities when projections are disjoint.

In this model the two groups are disjoint and so are their projections on
the candidate attribute set.  Each coefficient counts instances for one
combination of known sizes (cases A-F); probabilities are ratios of them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .errors import MissingSizeError, ProfileError
from .exactmath import DomainSpec, ExactProb, alpha, big_binomial, big_multinomial

__all__ = [
    "M1Case",
    "SizeProfile",
    "ScanResult",
    "rho_total",
    "rho_groups",
    "beta",
    "lambda_coeff",
    "gamma_coeff",
    "delta_coeff",
    "gamma_distribution",
    "m1_probability",
    "pattern_probability",
    "projection_size_probability",
    "robustness_probability",
    "scan_attribute_count",
    "round_size",
]


class M1Case(enum.Enum):
    A = "A"  # n
    B = "B"  # n, n1, n2
    C = "C"  # n, k
    D = "D"  # n, k1, k2
    E = "E"  # n, n1, n2, k
    F = "F"  # n, n1, n2, k1, k2


_REQUIRED = {
    M1Case.A: ("n",),
    M1Case.B: ("n", "n1", "n2"),
    M1Case.C: ("n", "k"),
    M1Case.D: ("n", "k1", "k2"),
    M1Case.E: ("n", "n1", "n2", "k"),
    M1Case.F: ("n", "n1", "n2", "k1", "k2"),
}


@dataclass(frozen=True)
class SizeProfile:
    """Known sizes of an instance and of its projection on the candidate set."""

    n: int
    spec: DomainSpec
    n1: int | None = None
    n2: int | None = None
    k: int | None = None
    k1: int | None = None
    k2: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ProfileError(f"n must be >= 1, got {self.n}")
        if (self.n1 is None) != (self.n2 is None):
            raise ProfileError("n1 and n2 must be given together")
        if self.n1 is not None:
            if self.n1 < 1 or self.n2 < 1:
                raise ProfileError("group sizes must be >= 1")
            if self.n1 + self.n2 != self.n:
                raise ProfileError(f"n1 + n2 = {self.n1 + self.n2} differs from n = {self.n}")
        d_y = self.spec.d_y
        if self.k is not None and not 1 <= self.k <= min(self.n, d_y):
            raise ProfileError(f"k = {self.k} outside [1, min(n, d_y)]")
        for name, size in (("k1", self.n1), ("k2", self.n2)):
            value = getattr(self, name)
            if value is None:
                continue
            upper = min(size if size is not None else self.n, d_y)
            if not 1 <= value <= upper:
                raise ProfileError(f"{name} = {value} outside [1, {upper}]")

    @classmethod
    def from_groups(cls, n1: int, n2: int, spec: DomainSpec, **sizes) -> "SizeProfile":
        return cls(n=n1 + n2, spec=spec, n1=n1, n2=n2, **sizes)

    def require(self, case: M1Case) -> None:
        for name in _REQUIRED[case]:
            if getattr(self, name) is None:
                raise MissingSizeError(case.value, name)
        if case in (M1Case.D, M1Case.F) and self.k is not None:
            if self.k1 + self.k2 != self.k:
                raise ProfileError("disjoint projections need k1 + k2 == k")

    def with_spec(self, spec: DomainSpec) -> "SizeProfile":
        return replace(self, spec=spec)


def _check_count(name: str, value: int, low: int = 0) -> None:
    if value < low:
        raise ProfileError(f"{name} must be >= {low}, got {value}")


@lru_cache(maxsize=256)
def rho_total(n: int, spec: DomainSpec) -> int:
    """Instances of n observations, each occupied y-value owned by one group.

    Groups are allowed to be empty here, which is what makes the count
    equal to the sum of ``beta`` over k.
    """
    _check_count("n", n, 1)
    d_y = spec.d_y
    total = 0
    c = 1
    for k in range(1, min(n, d_y) + 1):
        c = c * (d_y - k + 1) // k
        total += (c << k) * alpha(k, n, spec)
    return total


@lru_cache(maxsize=256)
def rho_groups(n1: int, n2: int, spec: DomainSpec) -> int:
    """Instances with group sizes n1, n2 (both >= 1) and disjoint projections."""
    _check_count("n1", n1, 1)
    _check_count("n2", n2, 1)
    d_y = spec.d_y
    a2 = [alpha(k2, n2, spec) for k2 in range(min(n2, d_y) + 1)]
    total = 0
    c1 = 1  # C(d_y, k1)
    for k1 in range(1, min(n1, d_y) + 1):
        c1 = c1 * (d_y - k1 + 1) // k1
        a1 = alpha(k1, n1, spec)
        if not a1:
            continue
        rest = d_y - k1
        c2 = 1  # C(d_y - k1, k2)
        inner = 0
        for k2 in range(1, min(n2, rest) + 1):
            c2 = c2 * (rest - k2 + 1) // k2
            inner += c2 * a2[k2]
        total += c1 * a1 * inner
    return total


def beta(k: int, n: int, spec: DomainSpec) -> int:
    """Instances of size n whose projection has exactly k values (case C)."""
    _check_count("n", n, 1)
    _check_count("k", k)
    return (big_binomial(spec.d_y, k) << k) * alpha(k, n, spec)


def lambda_coeff(k1: int, k2: int, n: int, spec: DomainSpec) -> int:
    """Instances of size n whose group projections have sizes k1, k2 (case D).

    Zero projection sizes are accepted: with them, summing over
    k1 + k2 = k recovers ``beta(k, n)`` exactly.
    """
    _check_count("k1", k1)
    _check_count("k2", k2)
    _check_count("n", n)
    return big_multinomial(spec.d_y, k1, k2) * alpha(k1 + k2, n, spec)


def gamma_coeff(k: int, n1: int, n2: int, spec: DomainSpec) -> int:
    """Instances with group sizes n1, n2 and total projection size k (case E)."""
    _check_count("n1", n1, 1)
    _check_count("n2", n2, 1)
    _check_count("k", k)
    total = 0
    for k1 in range(max(1, k - n2), min(k - 1, n1) + 1):
        total += delta_coeff(k1, k - k1, n1, n2, spec)
    return total


def delta_coeff(k1: int, k2: int, n1: int, n2: int, spec: DomainSpec) -> int:
    """Instances with all four sizes known (case F)."""
    for name, value in (("k1", k1), ("k2", k2), ("n1", n1), ("n2", n2)):
        _check_count(name, value)
    m = big_multinomial(spec.d_y, k1, k2)
    if not m:
        return 0
    a1 = alpha(k1, n1, spec)
    if not a1:
        return 0
    return m * a1 * alpha(k2, n2, spec)


def gamma_distribution(n1: int, n2: int, spec: DomainSpec) -> dict[int, int]:
    """Map k -> gamma(k; n1, n2) over the support 2..min(n1+n2, d_y)."""
    top = min(n1 + n2, spec.d_y)
    return {k: gamma_coeff(k, n1, n2, spec) for k in range(2, top + 1)}


def m1_probability(case: M1Case | str, profile: SizeProfile) -> ExactProb:
    """Probability of the sizes a case adds, given what the case conditions on.

    A: 1 (nothing is asked), B: Pr(n1, n2 / n), C: Pr(k / n),
    D: Pr(k1, k2 / n), E: Pr(k / n1, n2), F: Pr(k1, k2 / n1, n2).
    """
    case = M1Case(case)
    profile.require(case)
    p, spec = profile, profile.spec
    if case is M1Case.A:
        return ExactProb.from_counts(rho_total(p.n, spec), rho_total(p.n, spec))
    if case is M1Case.B:
        return ExactProb.from_counts(rho_groups(p.n1, p.n2, spec), rho_total(p.n, spec))
    if case is M1Case.C:
        return ExactProb.from_counts(beta(p.k, p.n, spec), rho_total(p.n, spec))
    if case is M1Case.D:
        return ExactProb.from_counts(lambda_coeff(p.k1, p.k2, p.n, spec), rho_total(p.n, spec))
    if case is M1Case.E:
        return ExactProb.from_counts(gamma_coeff(p.k, p.n1, p.n2, spec), rho_groups(p.n1, p.n2, spec))
    return ExactProb.from_counts(
        delta_coeff(p.k1, p.k2, p.n1, p.n2, spec), rho_groups(p.n1, p.n2, spec)
    )


def pattern_probability(n1: int, n2: int, spec: DomainSpec, r: int = 1) -> ExactProb:
    """Pr(the positive group projects onto exactly r values / n1, n2).

    r = 1 is the probability that the candidate set is a single pattern.
    """
    if not 1 <= r <= min(n1, spec.d_y):
        raise ProfileError(f"r = {r} outside [1, min(n1, d_y)]")
    top = min(n2, spec.d_y - r)
    favourable = sum(delta_coeff(r, k2, n1, n2, spec) for k2 in range(1, top + 1))
    return ExactProb.from_counts(favourable, rho_groups(n1, n2, spec))


def projection_size_probability(k: int, n: int, spec: DomainSpec) -> ExactProb:
    """Pr(k / n) for n distinct observations with no group structure.

    Every n-subset of the domain is equally likely, so the count is
    C(d_y, k) alpha(k, n) out of C(d_x, n).
    """
    _check_count("n", n, 1)
    _check_count("k", k)
    favourable = big_binomial(spec.d_y, k) * alpha(k, n, spec)
    return ExactProb.from_counts(favourable, big_binomial(spec.d_x, n))


def robustness_probability(
    profile: SizeProfile, grouped: bool = False, ungrouped_model: str = "plain"
) -> ExactProb:
    """Probability that every y-value occurs (projection size equals d_y).

    Grouped: gamma(d_y; n1, n2) / rho(n1, n2).  Ungrouped, ``"plain"`` treats
    the n observations as one unlabelled set; ``"m1"`` uses beta / rho_n,
    where the group labels weight each instance by 2^k.
    """
    spec = profile.spec
    d_y = spec.d_y
    if grouped:
        if profile.n1 is None:
            raise MissingSizeError("E", "n1")
        n1, n2 = profile.n1, profile.n2
        favourable = gamma_coeff(d_y, n1, n2, spec) if d_y <= n1 + n2 else 0
        return ExactProb.from_counts(favourable, rho_groups(n1, n2, spec))
    if ungrouped_model == "plain":
        return projection_size_probability(d_y, profile.n, spec)
    if ungrouped_model != "m1":
        raise ValueError(f"unknown ungrouped model {ungrouped_model!r}")
    favourable = beta(d_y, profile.n, spec) if d_y <= profile.n else 0
    return ExactProb.from_counts(favourable, rho_total(profile.n, spec))


@dataclass
class ScanResult:
    n1: int
    n2: int
    total_attrs: int
    points: list[tuple[int, ExactProb]] = field(default_factory=list)

    @property
    def argmax(self) -> int | None:
        """|Y| with the largest ratio; ties go to the smallest |Y|."""
        best = None
        for y, ratio in self.points:
            if best is None or ratio > best[1]:
                best = (y, ratio)
        return None if best is None else best[0]

    @property
    def unimodal(self) -> bool:
        """True if the curve rises (weakly) then falls (weakly)."""
        values = [r for _, r in self.points]
        i = 0
        while i + 1 < len(values) and values[i + 1] >= values[i]:
            i += 1
        while i + 1 < len(values) and values[i + 1] <= values[i]:
            i += 1
        return i + 1 >= len(values)


def scan_attribute_count(
    n1: int, n2: int, total_attrs: int, y_range: tuple[int, int] | None = None
) -> ScanResult:
    """Ratio rho(n1, n2) / rho(n) for each split |Y| + |Z| = total_attrs.

    ``y_range`` is an inclusive interval, defaulting to [1, total_attrs].
    """
    lo, hi = y_range if y_range is not None else (1, total_attrs)
    if not 1 <= lo <= hi <= total_attrs:
        raise ProfileError(f"y_range {lo}..{hi} not within [1, {total_attrs}]")
    result = ScanResult(n1, n2, total_attrs)
    for y in range(lo, hi + 1):
        spec = DomainSpec(y, total_attrs - y)
        ratio = ExactProb.from_counts(rho_groups(n1, n2, spec), rho_total(n1 + n2, spec))
        result.points.append((y, ratio))
    return result


def round_size(value: float | Fraction, mode: str = "nearest") -> int:
    """Round an averaged projection size to an integer.

    ``nearest`` rounds halves up; ``floor`` and ``ceil`` are also accepted.
    """
    value = Fraction(value)
    if mode == "nearest":
        return math.floor(value + Fraction(1, 2))
    if mode == "floor":
        return math.floor(value)
    if mode == "ceil":
        return math.ceil(value)
    raise ValueError(f"unknown rounding mode {mode!r}")
