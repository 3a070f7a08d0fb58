"""Pure-Python oracle kernels.

Reference implementation of the hot loops; ``_ckernels.pyx`` mirrors it
line for line and must produce identical tallies for identical seeds.
Observations are integers x in [0, d_y * d_z); the y-value is x // d_z.
"""

from __future__ import annotations

from itertools import combinations

MASK64 = (1 << 64) - 1
PRNG_NAME = "splitmix64"


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a SplitMix64 state; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def uniform_below(state: int, bound: int) -> tuple[int, int]:
    """Unbiased integer in [0, bound) by rejecting the short top slice."""
    threshold = ((1 << 64) - bound) % bound
    while True:
        state, x = splitmix64(state)
        if x >= threshold:
            return state, x % bound


def sample_tally(
    d_y: int,
    d_z: int,
    n1: int,
    n2: int,
    trials: int,
    seed: int,
    disjoint_only: bool = False,
    max_attempts: int = 0,
) -> tuple[dict[tuple[int, int, int], int], int]:
    """Draw random disjoint groups and tally (k1, k2, u) per accepted draw.

    With ``disjoint_only`` draws whose projections intersect are rejected
    until ``trials`` draws are accepted or ``max_attempts`` (0 = no limit)
    draws were made.  Returns the tally and the number of attempts.
    """
    domain = d_y * d_z
    state = seed & MASK64
    tally: dict[tuple[int, int, int], int] = {}
    accepted = attempts = 0
    while accepted < trials and (max_attempts == 0 or attempts < max_attempts):
        attempts += 1
        seen: set[int] = set()
        ys1: set[int] = set()
        ys2: set[int] = set()
        for i in range(n1 + n2):
            while True:
                state, x = uniform_below(state, domain)
                if x not in seen:
                    break
            seen.add(x)
            (ys1 if i < n1 else ys2).add(x // d_z)
        u = len(ys1 & ys2)
        if disjoint_only and u:
            continue
        key = (len(ys1), len(ys2), u)
        tally[key] = tally.get(key, 0) + 1
        accepted += 1
    return tally, attempts


def _ymask_table(d_y: int, d_z: int) -> list[int]:
    block = (1 << d_z) - 1
    table = []
    for mask in range(1 << (d_y * d_z)):
        ym = 0
        for y in range(d_y):
            if (mask >> (y * d_z)) & block:
                ym |= 1 << y
        table.append(ym)
    return table


def exhaustive_m2(d_y: int, d_z: int, n: int) -> dict[tuple[int, int, int, int], int]:
    """Every n-set of observations under every 2-colouring.

    Keys are (n1, k1, k2, u); group 2 receives the uncoloured observations,
    so n2 = n - n1 and either group may be empty.
    """
    ymask = _ymask_table(d_y, d_z)
    tally: dict[tuple[int, int, int, int], int] = {}
    for combo in combinations(range(d_y * d_z), n):
        full = 0
        for x in combo:
            full |= 1 << x
        g1 = full
        while True:
            g2 = full ^ g1
            y1, y2 = ymask[g1], ymask[g2]
            key = (g1.bit_count(), y1.bit_count(), y2.bit_count(), (y1 & y2).bit_count())
            tally[key] = tally.get(key, 0) + 1
            if g1 == 0:
                break
            g1 = (g1 - 1) & full
    return tally


def exhaustive_m1(d_y: int, d_z: int, n: int) -> dict[tuple[int, int, int], int]:
    """Every n-set with each occupied y-value handed wholly to one group.

    Keys are (n1, k1, k2).  No rejection step: disjoint projections hold by
    construction.
    """
    ymask = _ymask_table(d_y, d_z)
    block = (1 << d_z) - 1
    expand = []
    for s in range(1 << d_y):
        m = 0
        for y in range(d_y):
            if s >> y & 1:
                m |= block << (y * d_z)
        expand.append(m)
    tally: dict[tuple[int, int, int], int] = {}
    for combo in combinations(range(d_y * d_z), n):
        full = 0
        for x in combo:
            full |= 1 << x
        occ = ymask[full]
        k = occ.bit_count()
        s = occ
        while True:
            k1 = s.bit_count()
            key = ((full & expand[s]).bit_count(), k1, k - k1)
            tally[key] = tally.get(key, 0) + 1
            if s == 0:
                break
            s = (s - 1) & occ
    return tally
