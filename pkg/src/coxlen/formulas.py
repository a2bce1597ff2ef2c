"""Closed-form values for powers of Coxeter elements (s_1 ... s_n)^lam s_1 ... s_r."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional

from .core import INF


def normalize(n: int, lam: int, r: int):
    """Map r = 0 onto (lam - 1, n); (0, 0) stays the identity."""
    if n < 1 or lam < 0 or not 0 <= r <= n:
        raise ValueError(f"need n >= 1, lam >= 0 and 0 <= r <= n; got n={n}, lam={lam}, r={r}")
    if r == 0 and lam > 0:
        return lam - 1, n
    return lam, r


def _ind(cond: bool) -> int:
    return 1 if cond else 0


def universal_power_length(n: int, lam: int, r: int) -> int:
    lam, r = normalize(n, lam, r)
    if r == 0:
        return 0
    return lam * (n - 2) + r


def chi(m: int, n: int) -> int:
    """Shortest consecutive block of (s_1...s_n)^lam containing an alternating block of length m."""
    if m == INF or m < 2 or n < 2:
        raise ValueError("chi needs a finite label m >= 2 and n >= 2")
    if m % 2:
        return (m - 1) // 2 * n + 1
    return m // 2 * n - (n - 2)


def unbounded_condition(m: int, n: int) -> bool:
    """Whether the lower-bound growth rate is positive for label m in rank n."""
    if n < 3:
        raise ValueError("unbounded_condition needs n >= 3")
    return chi(m, n) * (n - 2) - 2 * n > 0


def theorem1_lower_bound(n: int, k: int, lam: int) -> int:
    """ceil(lam*n*(1 - 2/chi) - 2*lam + 2), evaluated exactly."""
    if n < 3 or lam < 1:
        raise ValueError("theorem1_lower_bound needs n >= 3 and lam >= 1")
    c = chi(k, n)
    return ceil(lam * n * (1 - Fraction(2, c)) - 2 * lam + 2)


def power_lower_bound(n: int, k: int, lam: int, r: int) -> int:
    """The same count applied to a word of length lam*n + r, clamped at the parity floor.

    Agrees with theorem1_lower_bound when r = 0.
    """
    u = universal_power_length(n, lam, r)
    length = lam * n + r
    floor_ = length % 2
    if k == INF:
        return u
    val = ceil(u - Fraction(2 * length, chi(k, n)))
    return max(val, floor_)


def upper_bound_rank3(k: int, lam: int, r: int) -> int:
    lam, r = normalize(3, lam, r)
    if k == INF:
        return universal_power_length(3, lam, r)
    if k < 3:
        raise ValueError("upper_bound_rank3 needs k >= 3")
    if r == 0:
        return 0
    return lam + r - 2 * ((lam + _ind(r >= 2)) // k)


def upper_bound_rank_ge4(n: int, k: int, lam: int, r: int) -> int:
    if n < 4:
        raise ValueError("upper_bound_rank_ge4 needs n >= 4")
    lam, r = normalize(n, lam, r)
    if k == INF:
        return universal_power_length(n, lam, r)
    if k < 3:
        raise ValueError("upper_bound_rank_ge4 needs k >= 3")
    if r == 0:
        return 0
    e = _ind(r >= 2)
    if lam + e < k:
        return lam * (n - 2) + r
    return lam * (n - 2) + r - 2 * (1 + floor(Fraction(lam - k + e, k - 1)))


def upper_bound(n: int, k: int, lam: int, r: int) -> int:
    return upper_bound_rank3(k, lam, r) if n == 3 else upper_bound_rank_ge4(n, k, lam, r)


def commuting_rank3_length(lam: int) -> set:
    if lam < 1:
        raise ValueError("lam must be >= 1")
    return {2} if lam % 2 == 0 else {1, 3}


@dataclass
class BoundParams:
    n: int
    k: int
    lam: int
    r: int


@dataclass
class BoundReport:
    params: BoundParams
    lower: int
    upper: int
    exact_universal: int
    unbounded_condition_met: bool
    computed: Optional[int] = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["params"]["lambda"] = d["params"].pop("lam")
        if d["params"]["k"] == INF:
            d["params"]["k"] = "inf"
        return d


def bound_report(n: int, k: int, lam: int, r: int) -> BoundReport:
    if n < 3:
        raise ValueError("bounds are stated for rank >= 3")
    return BoundReport(
        params=BoundParams(n, k, lam, r),
        lower=power_lower_bound(n, k, lam, r),
        upper=upper_bound(n, k, lam, r),
        exact_universal=universal_power_length(n, lam, r),
        unbounded_condition_met=(k != INF and unbounded_condition(k, n)),
    )
