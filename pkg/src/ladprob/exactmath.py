"""Exact integer/rational arithmetic and the occupancy coefficient alpha.

Every count in the package is a Python ``int`` and every probability an
:class:`ExactProb` (a range-checked :class:`fractions.Fraction`).  Floating
point only appears when a value is rendered for display.
"""

from __future__ import annotations

import math
import os
import threading
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction

from .errors import ImpossibleConditionError

__all__ = [
    "DomainSpec",
    "ExactProb",
    "AlphaCache",
    "big_binomial",
    "big_multinomial",
    "alpha",
    "alpha_direct",
    "alpha_convolution",
    "default_alpha_cache",
    "to_decimal",
    "parse_rendered",
    "rendered_ulp",
]

CACHE_ENV_VAR = "LADPROB_ALPHA_CACHE"
_DEFAULT_CACHE_TABLES = 8
# The "1 - eps" display kicks in below this distance from 1.
_EPS_THRESHOLD = Fraction(1, 1000)
_EPS_DIGITS = 2


@dataclass(frozen=True)
class DomainSpec:
    """Sizes of the two aggregated attributes, counted in Boolean attributes."""

    y_attrs: int
    z_attrs: int

    def __post_init__(self):
        if self.y_attrs < 0 or self.z_attrs < 0:
            raise ValueError(f"attribute counts must be >= 0, got {self}")

    @property
    def d_y(self) -> int:
        return 1 << self.y_attrs

    @property
    def d_z(self) -> int:
        return 1 << self.z_attrs

    @property
    def d_x(self) -> int:
        return 1 << (self.y_attrs + self.z_attrs)


class ExactProb(Fraction):
    """A rational number in [0, 1], always in lowest terms."""

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        if self < 0 or self > 1:
            raise ValueError(f"probability out of range: {Fraction(self)}")
        return self

    @classmethod
    def from_counts(cls, favourable: int, total: int) -> "ExactProb":
        """Ratio of two instance counts; a zero total is an impossible condition."""
        if total == 0:
            raise ImpossibleConditionError("conditioning event has no instances")
        return cls(favourable, total)

    def complement(self) -> "ExactProb":
        return ExactProb(1 - Fraction(self))


def big_binomial(m: int, n: int) -> int:
    """C(m, n) for possibly astronomically large m and modest n.

    Uses the falling factorial m(m-1)...(m-n+1) / n!, never m!.
    """
    if m < 0 or n < 0:
        raise ValueError(f"big_binomial needs m, n >= 0, got ({m}, {n})")
    if n > m:
        return 0
    n = min(n, m - n)
    if n == 0:
        return 1
    return math.prod(range(m - n + 1, m + 1)) // math.factorial(n)


def big_multinomial(d: int, k1: int, k2: int) -> int:
    """d! / (k1! k2! (d-k1-k2)!), or 0 when k1 + k2 > d."""
    if k1 < 0 or k2 < 0 or d < 0:
        raise ValueError("big_multinomial needs non-negative arguments")
    if k1 + k2 > d:
        return 0
    return big_binomial(d, k1) * big_binomial(d - k1, k2)


class _AlphaTable:
    """Alpha values for one |Z|, plus the binomial rows C(r*d_z, n) they use."""

    def __init__(self, z_attrs: int):
        self.d_z = 1 << z_attrs
        self.rows: list[list[int]] = [[1]]
        self.values: dict[tuple[int, int], int] = {}

    def binom(self, r: int, n: int) -> int:
        while len(self.rows) <= r:
            self.rows.append([1])
        row = self.rows[r]
        m = r * self.d_z
        c = row[-1]
        for j in range(len(row) - 1, n):
            c = c * (m - j) // (j + 1)
            row.append(c)
        return row[n]

    def alpha(self, k: int, n: int) -> int:
        key = (k, n)
        hit = self.values.get(key)
        if hit is not None:
            return hit
        if k == 0:
            value = 1 if n == 0 else 0
        elif n < k or n > k * self.d_z:
            value = 0
        else:
            total = 0
            c = 1  # C(k, r), built incrementally
            for r in range(1, k + 1):
                c = c * (k - r + 1) // r
                term = c * self.binom(r, n)
                total += -term if (k - r) & 1 else term
            value = total
        if value < 0:
            raise AssertionError(f"negative alpha({k},{n}) - arithmetic bug")
        self.values[key] = value
        return value


class AlphaCache:
    """Thread-safe memo of alpha(k, n) keyed by (k, n, |Z|).

    Tables for distinct |Z| are kept in LRU order; ``max_tables`` bounds
    memory when scanning many attribute splits.  The default comes from
    the ``LADPROB_ALPHA_CACHE`` environment variable.
    """

    def __init__(self, max_tables: int | None = None):
        if max_tables is None:
            max_tables = int(os.environ.get(CACHE_ENV_VAR, _DEFAULT_CACHE_TABLES))
        if max_tables < 1:
            raise ValueError("AlphaCache needs room for at least one table")
        self.max_tables = max_tables
        self._tables: OrderedDict[int, _AlphaTable] = OrderedDict()
        self._lock = threading.RLock()

    def get(self, k: int, n: int, z_attrs: int) -> int:
        with self._lock:
            table = self._tables.get(z_attrs)
            if table is None:
                table = _AlphaTable(z_attrs)
                self._tables[z_attrs] = table
                while len(self._tables) > self.max_tables:
                    self._tables.popitem(last=False)
            else:
                self._tables.move_to_end(z_attrs)
            return table.alpha(k, n)

    def clear(self) -> None:
        with self._lock:
            self._tables.clear()

    def __len__(self) -> int:
        with self._lock:
            return sum(len(t.values) for t in self._tables.values())


default_alpha_cache = AlphaCache()


def alpha_direct(k: int, n: int, spec: DomainSpec) -> int:
    """Uncached alternating sum  sum_r (-1)^(k-r) C(k,r) C(r d_z, n)."""
    if k < 0 or n < 0:
        raise ValueError("alpha needs k, n >= 0")
    d_z = spec.d_z
    total = sum(
        (-1) ** (k - r) * math.comb(k, r) * big_binomial(r * d_z, n) for r in range(0, k + 1)
    )
    return total


def alpha_convolution(k: int, n: int, spec: DomainSpec) -> int:
    """[z^n] phi(z)^k by repeated truncated polynomial products.

    alpha(k, n) = sum_{m>=1} C(d_z, m) alpha(k-1, n-m); this never touches
    the alternating sum and serves as its cross-check.
    """
    if k < 0 or n < 0:
        raise ValueError("alpha needs k, n >= 0")
    d_z = spec.d_z
    phi = [0] + [math.comb(d_z, m) for m in range(1, n + 1)]
    power = [1] + [0] * n
    for _ in range(k):
        nxt = [0] * (n + 1)
        for i, a in enumerate(power):
            if a:
                for m in range(1, n - i + 1):
                    if phi[m]:
                        nxt[i + m] += a * phi[m]
        power = nxt
    return power[n]


def alpha(
    k: int,
    n: int,
    spec: DomainSpec,
    *,
    method: str = "auto",
    cache: AlphaCache | None = None,
) -> int:
    """Number of ways n distinct (y, z) couples realise exactly k fixed y-values.

    ``method`` is ``"auto"``/``"direct"`` (memoized alternating sum) or
    ``"convolution"`` (uncached recurrence, for verification).
    """
    if k < 0 or n < 0:
        raise ValueError("alpha needs k, n >= 0")
    if method == "convolution":
        return alpha_convolution(k, n, spec)
    if method not in ("auto", "direct"):
        raise ValueError(f"unknown alpha method {method!r}")
    return (cache or default_alpha_cache).get(k, n, spec.z_attrs)


# ---------------------------------------------------------------------------
# Decimal rendering


def _floor_log10(x: Fraction) -> int:
    """Largest e with 10**e <= x, for x > 0."""
    num, den = x.numerator, x.denominator
    e = int((num.bit_length() - den.bit_length()) * 0.30102999566398120)
    while _pow10(e) > x:
        e -= 1
    while _pow10(e + 1) <= x:
        e += 1
    return e


def _pow10(e: int) -> Fraction:
    return Fraction(10**e) if e >= 0 else Fraction(1, 10**-e)


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def _scientific(x: Fraction, digits: int) -> str:
    e = _floor_log10(x)
    mant = _round_half_up(x / _pow10(e - digits + 1))
    if mant >= 10**digits:
        e += 1
        mant = _round_half_up(x / _pow10(e - digits + 1))
    s = str(mant)
    body = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{body}e{e}"


def _fixed(x: Fraction, digits: int) -> str:
    e = _floor_log10(x)
    decimals = max(digits - 1 - e, 0)
    scaled = _round_half_up(x * 10**decimals)
    if len(str(scaled)) > digits and decimals > 0:
        decimals -= 1
        scaled = _round_half_up(x * 10**decimals)
    s = str(scaled).rjust(decimals + 1, "0")
    if decimals == 0:
        return s
    return f"{s[:-decimals]}.{s[-decimals:]}"


def to_decimal(p: Fraction, sig_digits: int = 4) -> str:
    """Render a probability with ``sig_digits`` significant digits.

    Values within 1e-3 of one are shown as ``"1 - <eps>"`` with eps in
    scientific notation; values below 1e-3 use scientific notation.
    """
    if sig_digits < 1:
        raise ValueError("sig_digits must be >= 1")
    p = Fraction(p)
    if p == 0:
        return "0"
    if p == 1:
        return "1"
    eps = 1 - p
    if 0 < eps < _EPS_THRESHOLD:
        return f"1 - {_scientific(eps, min(sig_digits, _EPS_DIGITS))}"
    if p < _EPS_THRESHOLD:
        return _scientific(p, sig_digits)
    return _fixed(p, sig_digits)


def parse_rendered(text: str) -> Fraction:
    """Inverse of :func:`to_decimal` (up to the rounding it applied)."""
    text = text.strip()
    if text.startswith("1 - "):
        return 1 - Fraction(text[4:])
    return Fraction(text)


def rendered_ulp(text: str) -> Fraction:
    """One unit in the last printed significant digit of a rendered value."""
    text = text.strip()
    if text.startswith("1 - "):
        text = text[4:]
    mant, _, exp = text.partition("e")
    decimals = len(mant.partition(".")[2])
    return _pow10(int(exp or 0) - decimals)
