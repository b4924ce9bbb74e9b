"""Occupancy laws for uniform draws into equal bins, exact and limiting.

The inclusion-exclusion sums behind these laws alternate, and their
terms can dwarf the result, so evaluation picks one of three routes.
Small problems run in exact integer arithmetic: each term is an integer
over m**n, the signed sum is again an integer, and every probability is
one correctly rounded float division.  From the collection threshold
n >= m log m up, the series terms fall off like a Poisson tail of rate
at most one and a log-magnitude route with compensated summation keeps
full precision.  Everything else (n below m log m at large m, where
cancellation exceeds float precision) runs a one-throw-at-a-time
recurrence on the occupied-bin count, which has only positive
coefficients and so cannot cancel at all.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import SampleSet, SpherePack, assign_points

# Exact-integer route bounds: bin count, and total big-int work (digit
# counts grow with n*log m, term counts with m).
_EXACT_BINS = 512
_EXACT_WORK = 2_000_000


def _use_exact(m: int, n: int) -> bool:
    return m <= _EXACT_BINS and m * n <= _EXACT_WORK


def _series_is_tame(m: int, n: int) -> bool:
    """True when the log route keeps full precision across the whole law.

    Past the first few indices the series terms decay like a Poisson
    tail of rate lam = m(1-1/m)^n, and cancellation inflates the summed
    rounding error by about e^(2 lam); lam <= 1 keeps that inflation
    within one decimal digit.  Every other empty count has a smaller
    rate, so checking the leading one covers the full law.
    """
    return math.log(m) + n * math.log1p(-1.0 / m) <= 0.0


@dataclass(frozen=True)
class OccupancySummary:
    """Per-bin hit counts of one sample, with the empty-bin total."""

    m: int
    n: int
    counts: np.ndarray  # length m, read-only
    empty_count: int


@dataclass(frozen=True)
class OccupancyDistribution:
    """Law of the number of empty bins K for n uniform draws into m bins."""

    m: int
    n: int
    probs: np.ndarray  # index k = 0..m, read-only

    def __post_init__(self) -> None:
        total = float(math.fsum(self.probs.tolist()))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(
                f"occupancy law for m={self.m}, n={self.n} lost precision "
                f"(total mass {total!r}); this parameter corner cancels beyond float range"
            )
        self.probs.flags.writeable = False

    def prob(self, k: int) -> float:
        if not 0 <= k <= self.m:
            raise ValueError(f"empty count {k} outside 0..{self.m}")
        return float(self.probs[k])


@dataclass(frozen=True)
class CouponQuery:
    """A (bins, failure level) pair with its derived offset c = log(delta)."""

    m: int
    delta: float
    c: float = math.nan

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("need at least one bin")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must lie in (0, 1]")
        object.__setattr__(self, "c", math.log(self.delta))

    @property
    def sample_size(self) -> int:
        return threshold_sample_size(self.m, self.delta)

    @property
    def limit_miss_probability(self) -> float:
        return coupon_limit(self.c)


def summarize(pack: SpherePack, samples: SampleSet) -> OccupancySummary:
    """Hit counts per sphere for one sample set."""
    if samples.n:
        assigned = assign_points(pack, samples.points) - 1
        counts = np.bincount(assigned, minlength=pack.count)
    else:
        counts = np.zeros(pack.count, dtype=int)
    counts.flags.writeable = False
    return OccupancySummary(
        m=pack.count,
        n=samples.n,
        counts=counts,
        empty_count=int(np.count_nonzero(counts == 0)),
    )


def _empty_exactly_numer(m: int, n: int, k: int) -> int:
    """Number of assignments of n draws into m bins leaving exactly k empty.

    Integer-exact: C(m,k) times the alternating surjection count onto the
    remaining m-k bins.  Python's 0**0 == 1 makes n = 0 come out right.
    """
    width = m - k
    total = 0
    for j in range(width + 1):
        term = math.comb(width, j) * (width - j) ** n
        total = total - term if j & 1 else total + term
    return math.comb(m, k) * total


def _log_factorials(m: int) -> np.ndarray:
    return np.asarray([math.lgamma(i + 1.0) for i in range(m + 1)], dtype=float)


def _empty_exactly_log(lf: np.ndarray, m: int, n: int, k: int) -> float:
    """Log-magnitude route for P(K = k); peak-scaled compensated signed sum."""
    width = m - k
    j = np.arange(width + 1, dtype=float)
    with np.errstate(divide="ignore"):
        log_mag = (
            lf[m]
            - lf[k]
            - lf[np.arange(width + 1)]
            - lf[np.arange(width, -1, -1)]
            + n * (np.log(width - j) - math.log(m))
        )
    peak = float(np.max(log_mag))
    if peak == -math.inf:
        return 0.0
    scaled = np.exp(log_mag - peak)
    scaled[1::2] *= -1.0
    s = math.fsum(scaled.tolist())
    if s <= 0.0:
        return 0.0
    return math.exp(min(peak + math.log(s), 0.0))


def _occupied_counts_law(m: int, n: int) -> np.ndarray:
    """P(exactly j bins occupied) after n throws, index j = 0..m.

    One forward Markov step per throw: a ball lands in an occupied bin
    with probability j/m or opens a new one.  Every coefficient is
    positive, so this route is immune to the cancellation that limits
    the series routes; cost is O(n m) flops.
    """
    state = np.zeros(m + 1)
    state[0] = 1.0
    j = np.arange(m + 1, dtype=float)
    stay = j / m
    enter = (m - j + 1.0) / m  # entry into level j from j-1
    for _ in range(n):
        nxt = state * stay
        nxt[1:] += state[:-1] * enter[1:]
        state = nxt
    return state


def prob_all_occupied(m: int, n: int) -> float:
    """Probability that n uniform draws into m bins leave none empty.

    The value of P(K = 0); structurally zero whenever n < m.  Routed
    like the full law: exact integers, log series, or the throw
    recurrence, by size and conditioning.
    """
    if m < 1:
        raise ValueError("need at least one bin")
    if n < 0:
        raise ValueError("draw count must be >= 0")
    if n < m:
        return 0.0
    if _use_exact(m, n):
        return _empty_exactly_numer(m, n, 0) / m**n
    if _series_is_tame(m, n):
        return _empty_exactly_log(_log_factorials(m), m, n, 0)
    return float(_occupied_counts_law(m, n)[m])


def empty_count_distribution(m: int, n: int) -> OccupancyDistribution:
    """Full law of the empty-bin count K after n uniform draws into m bins.

    Support is k in [max(0, m-n), m-1] for n >= 1 (at most n bins can be
    hit, and at least one is) plus the point mass at m for n = 0.  On the
    exact route the numerators must sum to m**n; the float routes instead
    rely on the constructor's mass check.
    """
    if m < 1:
        raise ValueError("need at least one bin")
    if n < 0:
        raise ValueError("draw count must be >= 0")
    probs = np.zeros(m + 1)
    if n == 0:
        probs[m] = 1.0
        return OccupancyDistribution(m=m, n=n, probs=probs)
    k_lo = max(0, m - n)
    if _use_exact(m, n):
        denom = m**n
        numers = {k: _empty_exactly_numer(m, n, k) for k in range(k_lo, m)}
        assert sum(numers.values()) == denom
        for k, numer in numers.items():
            probs[k] = numer / denom
    elif _series_is_tame(m, n):
        lf = _log_factorials(m)
        for k in range(k_lo, m):
            probs[k] = _empty_exactly_log(lf, m, n, k)
    else:
        probs = _occupied_counts_law(m, n)[::-1].copy()
    return OccupancyDistribution(m=m, n=n, probs=probs)


def coupon_limit(c: float) -> float:
    """Limiting miss probability 1 - exp(-exp(c)) for n = m log m - cm draws."""
    try:
        return -math.expm1(-math.exp(c))
    except OverflowError:
        return 1.0


def threshold_sample_size(m: int, delta: float) -> int:
    """Draw count ceil(m log m + m log(1/delta)) aimed at miss level delta."""
    if m < 1:
        raise ValueError("need at least one bin")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    return max(0, math.ceil(m * math.log(m) + m * math.log(1.0 / delta)))
