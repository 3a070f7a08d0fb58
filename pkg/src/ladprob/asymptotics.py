"""Exponential-generating-function regime for a fixed, small number of y-values.

When d_z grows without bound, each y-value contributes e^z - 1 instead of
(1 + z)^d_z - 1 and the counts become exponential-type numbers.  Everything
here is prefixed ``egf_`` so it never gets mixed up with the exact counts of
:mod:`ladprob.model_m1`, which are ordinary-generating-function counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ProfileError
from .exactmath import DomainSpec
from .model_m1 import rho_total

__all__ = [
    "AsymptoticResult",
    "egf_rho",
    "egf_rho_groups",
    "egf_rho_groups_closed",
    "egf_ratio_exponent_d3",
    "ogf_to_egf",
    "convergence_bridge",
]


@dataclass(frozen=True)
class AsymptoticResult:
    exact_egf_value: int
    leading_term: int

    @property
    def relative_gap(self) -> Fraction:
        """|exact - leading| / leading."""
        return Fraction(abs(self.exact_egf_value - self.leading_term), self.leading_term)


def egf_rho(d: int, n: int) -> AsymptoticResult:
    """n! [z^n] (2 e^z - 1)^d, with its dominant term 2^d d^n."""
    if d < 1 or n < 0:
        raise ProfileError("egf_rho needs d >= 1 and n >= 0")
    exact = sum((-1) ** i * math.comb(d, i) * 2 ** (d - i) * (d - i) ** n for i in range(d + 1))
    return AsymptoticResult(exact, 2**d * d**n)


def egf_rho_groups(d: int, n1: int, n2: int) -> int:
    """n1! n2! [z1^n1 z2^n2] (e^z1 + e^z2 - 1)^d, for any d."""
    if d < 1 or n1 < 1 or n2 < 1:
        raise ProfileError("egf_rho_groups needs d >= 1 and n1, n2 >= 1")
    total = 0
    for i in range(d + 1):
        for j in range(d - i + 1):
            l = d - i - j
            term = math.comb(d, i) * math.comb(d - i, j) * i**n1 * j**n2
            total += -term if l & 1 else term
    return total


def egf_rho_groups_closed(d: int, n1: int, n2: int) -> int:
    """Closed forms of :func:`egf_rho_groups` for d = 2, 3, 4."""
    if n1 < 1 or n2 < 1:
        raise ProfileError("group sizes must be >= 1")
    if d == 2:
        return 2
    if d == 3:
        return 3 * (2**n1 + 2**n2) - 6
    if d == 4:
        return 4 * (3**n1 + 3**n2) + 6 * 2 ** (n1 + n2) - 12 * (2**n1 + 2**n2 - 1)
    raise ProfileError(f"no closed form for d = {d}; supported values are 2, 3, 4")


def egf_ratio_exponent_d3(alpha: float) -> float:
    """Decay rate b of rho(n1, n2) / rho(n) ~ C e^(-b n) for d = 3 and n1 = alpha n.

    The larger group dominates, so b = log 3 - max(alpha, 1 - alpha) log 2.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return math.log(3) - max(alpha, 1 - alpha) * math.log(2)


def ogf_to_egf(n: int, spec: DomainSpec) -> Fraction:
    """Rescale the exact count rho_total(n) into the exponential regime."""
    return Fraction(rho_total(n, spec) * math.factorial(n), spec.d_z**n)


def convergence_bridge(y_attrs: int, n: int, z_values: list[int]) -> list[tuple[int, Fraction]]:
    """Relative gap between the rescaled exact count and the EGF count, per |Z|."""
    target = egf_rho(1 << y_attrs, n).exact_egf_value
    out = []
    for z in z_values:
        value = ogf_to_egf(n, DomainSpec(y_attrs, z))
        out.append((z, abs(value - target) / target))
    return out
