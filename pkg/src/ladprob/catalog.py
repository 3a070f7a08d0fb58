"""Size profiles of eight published biological LAD instances.

Only the sizes are recorded, not the data.  ``k`` and ``k1`` are averages
over all minimum solutions where an instance has several.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactmath import DomainSpec
from .model_m1 import SizeProfile, round_size

__all__ = ["ReferenceInstance", "REFERENCE", "get"]


@dataclass(frozen=True)
class ReferenceInstance:
    name: str
    n1: int
    n2: int
    y_attrs: int
    z_attrs: int
    k: float
    k1: float
    solutions: int = 1

    @property
    def n(self) -> int:
        return self.n1 + self.n2

    @property
    def total_attrs(self) -> int:
        return self.y_attrs + self.z_attrs

    @property
    def spec(self) -> DomainSpec:
        return DomainSpec(self.y_attrs, self.z_attrs)

    def profile(self, rounding: str = "nearest") -> SizeProfile:
        """Group sizes plus rounded projection sizes (k2 = k - k1)."""
        k = round_size(self.k, rounding)
        k1 = round_size(self.k1, rounding)
        return SizeProfile(self.n, self.spec, self.n1, self.n2, k, k1, k - k1)


REFERENCE = {
    r.name: r
    for r in (
        ReferenceInstance("rch8", 5, 127, 3, 34, 8, 1),
        ReferenceInstance("ra_rep1", 38, 74, 12, 143, 95.30, 30.17, 134),
        ReferenceInstance("ra_rep2", 37, 75, 11, 62, 89.5, 28.35, 106),
        ReferenceInstance("ralsto", 27, 46, 5, 17, 17, 7.8, 5),
        ReferenceInstance("ra100_phv", 21, 80, 2, 48, 4, 1),
        ReferenceInstance("ra100_phy", 31, 74, 3, 48, 8, 5),
        ReferenceInstance("ra_phv", 22, 86, 2, 68, 3, 1),
        ReferenceInstance("ra_phy", 31, 81, 3, 70, 8, 5),
    )
}


def get(name: str) -> ReferenceInstance:
    try:
        return REFERENCE[name]
    except KeyError:
        raise KeyError(f"unknown reference instance {name!r}; known: {', '.join(REFERENCE)}") from None
