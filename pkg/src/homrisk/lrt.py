"""Likelihood-ratio test for sphere deletion: reports, closed forms, exact risk.

Both hypotheses put uniform product densities on their supports, so the
ratio collapses to a function of the empty-sphere count alone.  That makes
the exact error probabilities of the test a pair of tail sums of the
occupancy law, and ties the whole bench to the collection threshold
m ln m + m ln(1/delta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import SampleSet, SpherePack, sphere_surface_measure
from .homology import BettiProfile
from .occupancy import empty_count_distribution, summarize


@dataclass(frozen=True)
class LikelihoodReport:
    """Log likelihoods, their ratio, and the accept/reject decision."""

    log_L0: float
    log_L1: float
    ratio_L: float
    empty_count: int
    decision: int  # 1 = reject the full pack, 0 = accept


@dataclass(frozen=True)
class ExactRiskReport:
    """Exact error probabilities of the ratio test at one (m, n)."""

    m: int
    n: int
    k_threshold: float
    type_I: float
    type_II: float
    total: float


@dataclass(frozen=True)
class RateCurve:
    """Envelope values over a sample-size grid at fixed (radius, dim, delta)."""

    points: tuple[tuple[int, float], ...]
    radius: float
    dim: int
    delta: float


def _exp_or_inf(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def likelihood_ratio(pack: SpherePack, samples: SampleSet) -> LikelihoodReport:
    """Evaluate the deleted-sphere mixture against the full pack on one sample.

    The null density is 1/(m * area) per point; the mixture averages the
    m single-deletion densities, and a deletion contributes only when its
    sphere received no points.  With k empty spheres the ratio is
    (k/m) * (m/(m-1))^n.  Ties (ratio exactly 1) accept.

    Args:
        pack: the sphere pack, needing at least two spheres.
        samples: sample set whose points all assign to some sphere.

    Returns:
        LikelihoodReport with log likelihoods, ratio and decision.
    """
    m = pack.count
    if m < 2:
        raise ValueError("the deletion mixture needs at least two spheres")
    summary = summarize(pack, samples)
    n = summary.n
    k = summary.empty_count
    log_area = math.log(sphere_surface_measure(pack.intrinsic_dim)) + (
        pack.intrinsic_dim * math.log(pack.radius)
    )
    log_l0 = -n * (math.log(m) + log_area)
    if k == 0:
        log_l1 = -math.inf
        ratio = 0.0
    else:
        log_l1 = math.log(k) - math.log(m) - n * (math.log(m - 1) + log_area)
        ratio = _exp_or_inf(log_l1 - log_l0)
    return LikelihoodReport(
        log_L0=log_l0,
        log_L1=log_l1,
        ratio_L=ratio,
        empty_count=k,
        decision=1 if ratio > 1.0 else 0,
    )


def likelihood_ratio_closed_form(m: int, n: int, k: int) -> float:
    """Ratio value (k/m) * (m/(m-1))^n straight from the empty count."""
    if m < 2:
        raise ValueError("the deletion mixture needs at least two spheres")
    if n < 0:
        raise ValueError("sample size must be >= 0")
    if not 0 <= k <= m:
        raise ValueError(f"empty count {k} outside 0..{m}")
    if k == 0:
        return 0.0
    return _exp_or_inf(math.log(k) - math.log(m) - n * math.log1p(-1.0 / m))


def t_mn(m: int, n: int) -> float:
    """Ratio value when exactly one sphere is empty: (1/m) * (1-1/m)^(-n).

    Once this exceeds 1/delta the test rejects whenever any sphere is
    empty, which pins the sample-size threshold of the whole problem.
    """
    if m < 2:
        raise ValueError("the deletion mixture needs at least two spheres")
    if n < 0:
        raise ValueError("sample size must be >= 0")
    return _exp_or_inf(-math.log(m) - n * math.log1p(-1.0 / m))


def exact_lrt_risk(m: int, n: int) -> ExactRiskReport:
    """Exact error probabilities of the ratio test at (m, n).

    The test rejects when the empty count exceeds m(1-1/m)^n.  The false
    rejection side reads off the m-bin occupancy law.  Under a deletion
    the draws land uniformly on the other m-1 spheres, so the empty count
    is 1 plus the (m-1)-bin empty count, and by symmetry every deletion
    gives the same error; that is the false acceptance side.
    """
    if m < 2:
        raise ValueError("the deletion mixture needs at least two spheres")
    if n < 0:
        raise ValueError("sample size must be >= 0")
    k_threshold = m * (1.0 - 1.0 / m) ** n
    null_law = empty_count_distribution(m, n)
    ks = np.arange(m + 1)
    type_i = float(null_law.probs[ks > k_threshold].sum())
    alt_law = empty_count_distribution(m - 1, n)
    kprime = np.arange(m)
    type_ii = float(alt_law.probs[kprime + 1.0 <= k_threshold].sum())
    type_i = min(1.0, max(0.0, type_i))
    type_ii = min(1.0, max(0.0, type_ii))
    return ExactRiskReport(
        m=m,
        n=n,
        k_threshold=k_threshold,
        type_I=type_i,
        type_II=type_ii,
        total=type_i + type_ii,
    )


def risk_lower_bound(n: int, radius: float, dim: int, delta: float) -> float:
    """Rate envelope min((1/r^d) * exp(-n r^d), delta), constants set to one."""
    if n < 0:
        raise ValueError("sample size must be >= 0")
    if not 0.0 < radius < 0.5:
        raise ValueError("radius must lie in (0, 1/2)")
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    scale = radius**dim
    return min(math.exp(-n * scale) / scale, delta)


def rate_curve(
    n_values, radius: float, dim: int, delta: float
) -> RateCurve:
    """Evaluate the envelope over a grid of sample sizes."""
    pts = tuple((int(n), risk_lower_bound(int(n), radius, dim, delta)) for n in n_values)
    return RateCurve(points=pts, radius=float(radius), dim=int(dim), delta=float(delta))


def test_from_estimator(profile: BettiProfile, pack: SpherePack) -> int:
    """Plug-in decision: accept the full pack when the component count
    reaches the sphere count.

    Over-counting components (more than m) still accepts, since extra
    pieces come from sampling gaps on real spheres, not from a deletion.
    """
    return 0 if profile.betti[0] >= pack.count else 1
