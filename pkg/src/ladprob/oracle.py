"""Ground truth by brute force: exhaustive enumeration and Monte Carlo sampling.

Neither path uses any of the closed-form coefficients, so their outputs
can be compared against them directly.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field

from . import kernels
from .errors import BudgetError, CapExceededError, InfeasibleProfileError, ProfileError
from .exactmath import DomainSpec, big_binomial
from .model_m1 import SizeProfile

__all__ = [
    "Model",
    "OracleTally",
    "Estimate",
    "MonteCarloResult",
    "enumerate_exhaustive",
    "monte_carlo_estimate",
    "MAX_DOMAIN",
    "MAX_OBSERVATIONS",
]

MAX_DOMAIN = 16
MAX_OBSERVATIONS = 8
# The sampler draws uniform integers from a 64-bit generator.
_MAX_SAMPLING_DOMAIN = 1 << 64


class Model(enum.Enum):
    M1 = "M1"  # disjoint groups, disjoint projections
    M2 = "M2"  # disjoint groups only


FIELDS = {Model.M1: ("n1", "k1", "k2"), Model.M2: ("n1", "k1", "k2", "u")}


@dataclass
class OracleTally:
    """Counts of instances keyed by a tuple of statistics named in ``fields``."""

    model: Model
    spec: DomainSpec
    fields: tuple[str, ...]
    counts: dict[tuple[int, ...], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def marginal(self, *names: str) -> dict[tuple[int, ...], int]:
        """Sum the counts down to the named statistics.

        ``k`` (total projection size) is derived as k1 + k2 - u.
        """
        out: Counter = Counter()
        for key, count in self.counts.items():
            row = dict(zip(self.fields, key))
            row["k"] = row["k1"] + row["k2"] - row.get("u", 0)
            out[tuple(row[name] for name in names)] += count
        return dict(out)

    def count(self, **fixed: int) -> int:
        """Number of instances whose statistics equal every given value."""
        names = tuple(fixed)
        return self.marginal(*names).get(tuple(fixed[n] for n in names), 0)


def _check_caps(spec: DomainSpec, n: int) -> None:
    if spec.d_x > MAX_DOMAIN or n > MAX_OBSERVATIONS:
        required = big_binomial(spec.d_x, n) << n
        raise CapExceededError(
            f"exhaustive enumeration limited to d_y*d_z <= {MAX_DOMAIN} and n <= {MAX_OBSERVATIONS}",
            required,
        )


def enumerate_exhaustive(
    spec: DomainSpec,
    *,
    n: int | None = None,
    n1: int | None = None,
    n2: int | None = None,
    model: Model | str = Model.M1,
    method: str = "direct",
) -> OracleTally:
    """Enumerate every instance of the model and tally its statistics.

    Give either ``n`` (all group splits, empty groups included) or both
    ``n1`` and ``n2``.  For M1, ``method="direct"`` hands each occupied
    y-value wholly to one group, while ``method="filter"`` enumerates M2
    and keeps the instances with disjoint projections.
    """
    model = Model(model)
    if n is None:
        if n1 is None or n2 is None:
            raise ProfileError("give n, or both n1 and n2")
        n = n1 + n2
    elif n1 is not None or n2 is not None:
        if n1 is None or n2 is None or n1 + n2 != n:
            raise ProfileError("n1 + n2 must equal n")
    if n < 0:
        raise ProfileError("n must be >= 0")
    _check_caps(spec, n)

    if model is Model.M2:
        raw = kernels.exhaustive_m2(spec.d_y, spec.d_z, n)
    elif method == "direct":
        raw = kernels.exhaustive_m1(spec.d_y, spec.d_z, n)
    elif method == "filter":
        raw = {}
        for (a, k1, k2, u), c in kernels.exhaustive_m2(spec.d_y, spec.d_z, n).items():
            if u == 0:
                raw[(a, k1, k2)] = raw.get((a, k1, k2), 0) + c
    else:
        raise ValueError(f"unknown method {method!r}")

    if n1 is not None:
        raw = {key: c for key, c in raw.items() if key[0] == n1}
    return OracleTally(model, spec, FIELDS[model], dict(sorted(raw.items())))


@dataclass(frozen=True)
class Estimate:
    count: int
    trials: int

    @property
    def frequency(self) -> float:
        return self.count / self.trials

    @property
    def std_error(self) -> float:
        p = self.frequency
        return math.sqrt(p * (1 - p) / self.trials)


@dataclass
class MonteCarloResult:
    """Sampled tallies of (k1, k2, u) plus what is needed to reproduce them."""

    profile: SizeProfile
    model: Model
    trials: int
    seed: int
    attempts: int
    prng: str
    backend: str
    tally: dict[tuple[int, int, int], int]

    def marginal(self, name: str) -> dict[int, int]:
        index = {"k1": 0, "k2": 1, "u": 2}
        out: Counter = Counter()
        for (k1, k2, u), c in self.tally.items():
            value = k1 + k2 - u if name == "k" else (k1, k2, u)[index[name]]
            out[value] += c
        return dict(out)

    def estimate(self, name: str, value: int) -> Estimate:
        """Frequency of ``name == value`` among accepted draws."""
        return Estimate(self.marginal(name).get(value, 0), self.trials)

    @property
    def acceptance_rate(self) -> float:
        return self.trials / self.attempts if self.attempts else 0.0


def monte_carlo_estimate(
    profile: SizeProfile,
    model: Model | str,
    trials: int,
    seed: int,
    *,
    max_attempts: int = 0,
) -> MonteCarloResult:
    """Sample uniform instances with the profile's group sizes.

    Observations are distinct and drawn without replacement; for M1 draws
    with intersecting projections are rejected, which is exactly uniform
    sampling of M1 instances.  ``max_attempts`` bounds the rejection loop.
    """
    model = Model(model)
    if trials < 1:
        raise ProfileError("trials must be >= 1")
    if profile.n1 is None:
        raise ProfileError("Monte Carlo sampling needs the group sizes n1 and n2")
    spec = profile.spec
    if profile.n > spec.d_x:
        raise InfeasibleProfileError(f"n = {profile.n} exceeds the domain size {spec.d_x}")
    if spec.d_x > _MAX_SAMPLING_DOMAIN:
        raise CapExceededError("sampling domain exceeds the 64-bit generator range", spec.d_x)
    if model is Model.M1 and spec.d_y < 2:
        raise InfeasibleProfileError("M1 needs at least two y-values to separate the groups")
    tally, attempts = kernels.sample_tally(
        spec.d_y,
        spec.d_z,
        profile.n1,
        profile.n2,
        trials,
        seed,
        model is Model.M1,
        max_attempts,
    )
    accepted = sum(tally.values())
    if not accepted:
        raise BudgetError(f"no draw accepted within {attempts} attempts")
    return MonteCarloResult(
        profile=profile,
        model=model,
        trials=accepted,
        seed=seed,
        attempts=attempts,
        prng=kernels.PRNG_NAME,
        backend=kernels.BACKEND,
        tally=tally,
    )
