"""Sphere-pack hypothesis-testing bench.

Builds grids of disjoint d-spheres in the unit cube, samples them under
the full pack or with one sphere deleted, and measures how well tests
and homology estimators tell the two apart: exact occupancy laws, the
likelihood-ratio test with exact risk, Monte Carlo trials, and Betti
numbers over the two-element field.
"""
from .geometry import (
    Hypothesis,
    PackCheck,
    PackReport,
    SampleSet,
    SpherePack,
    assign,
    assign_points,
    build_pack,
    density_floor,
    derive_seed,
    load_points,
    sample,
    sample_assignments,
    save_points,
    sphere_surface_measure,
    unit_ball_volume,
    validate_pack,
)
from .harness import (
    CSV_HEADER,
    RateFit,
    RiskEstimate,
    SweepRow,
    TrialConfig,
    emit_csv,
    fit_rate,
    mc_risk,
    sample_complexity,
    sweep_n,
    trial_seed,
)
from .homology import (
    BettiProfile,
    ClusterEstimate,
    SimplicialComplex,
    betti,
    betti0_linkage,
    homology_estimator,
    rips,
)
from .lrt import (
    ExactRiskReport,
    LikelihoodReport,
    RateCurve,
    exact_lrt_risk,
    likelihood_ratio,
    likelihood_ratio_closed_form,
    rate_curve,
    risk_lower_bound,
    t_mn,
    test_from_estimator,
)
from .occupancy import (
    CouponQuery,
    OccupancyDistribution,
    OccupancySummary,
    coupon_limit,
    empty_count_distribution,
    prob_all_occupied,
    summarize,
    threshold_sample_size,
)

__all__ = [
    "BettiProfile",
    "ClusterEstimate",
    "CouponQuery",
    "ExactRiskReport",
    "Hypothesis",
    "LikelihoodReport",
    "OccupancyDistribution",
    "OccupancySummary",
    "PackCheck",
    "PackReport",
    "RateCurve",
    "CSV_HEADER",
    "RateFit",
    "RiskEstimate",
    "SampleSet",
    "SimplicialComplex",
    "SpherePack",
    "SweepRow",
    "TrialConfig",
    "assign",
    "assign_points",
    "betti",
    "betti0_linkage",
    "build_pack",
    "coupon_limit",
    "density_floor",
    "derive_seed",
    "emit_csv",
    "empty_count_distribution",
    "exact_lrt_risk",
    "fit_rate",
    "homology_estimator",
    "likelihood_ratio",
    "likelihood_ratio_closed_form",
    "load_points",
    "mc_risk",
    "prob_all_occupied",
    "rate_curve",
    "rips",
    "risk_lower_bound",
    "sample",
    "sample_assignments",
    "sample_complexity",
    "save_points",
    "sphere_surface_measure",
    "summarize",
    "sweep_n",
    "t_mn",
    "test_from_estimator",
    "threshold_sample_size",
    "trial_seed",
    "unit_ball_volume",
    "validate_pack",
]

__version__ = "0.1.0"
