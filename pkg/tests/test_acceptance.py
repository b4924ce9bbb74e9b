"""Acceptance gate: one test per shipped guarantee, one printed verdict line each.

Each test computes its quantities from scratch, prints a single
"criterion NN PASS/FAIL" line with the measured values, then asserts.
Failures here are release blockers, not flaky statistics: every random
check uses a fixed seed and generous error bars.
"""

import math
import os
import subprocess
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

import oracles
from homrisk import (
    TrialConfig,
    betti,
    empty_count_distribution,
    exact_lrt_risk,
    fit_rate,
    mc_risk,
    prob_all_occupied,
    rips,
    sweep_n,
    t_mn,
    threshold_sample_size,
)

M64_RADIUS = 1.0 / 256
M4_RADIUS = 1.0 / 16


def report(num, ok, detail):
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_01():
    # miss probability at n = ceil(m ln m) converges to 1 - 1/e with a
    # strictly shrinking gap, below 0.02 by m = 10000
    target = -math.expm1(-1.0)
    devs = []
    for m in (100, 1000, 10_000):
        n = math.ceil(m * math.log(m))
        miss = 1.0 - prob_all_occupied(m, n)
        devs.append(abs(miss - target))
    ok = devs[2] <= 0.02 and devs[0] > devs[1] > devs[2]
    report(1, ok, f"gaps to {target:.4f}: {devs[0]:.4e}, {devs[1]:.4e}, {devs[2]:.4e}")
    assert devs[2] <= 0.02
    assert devs[0] > devs[1] > devs[2], "gap must shrink strictly across the three m values"


def test_criterion_02():
    # at m = 4096 and target delta = 0.5 the threshold sample size lands the
    # miss probability within 0.01 of 1 - e^(-1/2)
    m = 4096
    n = threshold_sample_size(m, 0.5)
    miss = 1.0 - prob_all_occupied(m, n)
    target = -math.expm1(-0.5)
    gap = abs(miss - target)
    ok = gap <= 0.01
    report(2, ok, f"n={n}, miss={miss:.6f}, target={target:.6f}, gap={gap:.2e}")
    assert ok


def test_criterion_03():
    # the expected-empty-bin weight times delta is within 0.01 of 1 at the
    # threshold sample size
    m = 10_000
    delta = 0.5
    n = threshold_sample_size(m, delta)
    value = t_mn(m, n) * delta
    ok = abs(value - 1.0) <= 0.01
    report(3, ok, f"n={n}, t_mn*delta={value:.6f}")
    assert ok


def test_criterion_04():
    # 10^5 seeded trials of the ratio test at the 64-sphere pack reproduce
    # the exact error rates to four binomial standard errors
    trials = 100_000
    n = 311
    config = TrialConfig(
        intrinsic_dim=1,
        ambient_dim=2,
        radius=M64_RADIUS,
        n=n,
        trials=trials,
        master_seed=20_260_816,
        test_kind="lrt",
    )
    estimate = mc_risk(config)
    exact = exact_lrt_risk(64, n)
    band_1 = 4.0 * math.sqrt(exact.type_I * (1.0 - exact.type_I) / trials)
    band_2 = 4.0 * math.sqrt(exact.type_II * (1.0 - exact.type_II) / trials)
    gap_1 = abs(estimate.type_I_hat - exact.type_I)
    gap_2 = abs(estimate.type_II_hat - exact.type_II)
    ok = gap_1 <= band_1 and gap_2 <= band_2
    report(
        4,
        ok,
        f"type_I {estimate.type_I_hat:.5f} vs {exact.type_I:.5f} (band {band_1:.5f}), "
        f"type_II {estimate.type_II_hat:.5f} vs {exact.type_II:.5f}",
    )
    assert gap_1 <= band_1
    assert gap_2 <= band_2


def test_criterion_05():
    # exact type I error decays like exp(-n/m): fitted log-slope times m
    # is within 0.15 of -1
    config = TrialConfig(
        intrinsic_dim=1,
        ambient_dim=2,
        radius=M64_RADIUS,
        n=200,
        trials=1,
        master_seed=1,
        test_kind="lrt",
    )
    rows = sweep_n(config, range(200, 601, 25))
    fit = fit_rate(rows, "exact_type1")
    value = fit.slope * 64 + 1.0
    ok = abs(value) <= 0.15
    report(5, ok, f"slope={fit.slope:.6f}, slope*m + 1 = {value:.4f}")
    assert ok


def test_criterion_06():
    # two-sphere closed form: total exact risk is 2^(1-n), and the float
    # pipeline agrees with full rational enumeration
    for n in range(2, 11):
        rep = exact_lrt_risk(2, n)
        closed = 2.0 ** (1 - n)
        type_one, type_two = oracles.ratio_test_risk(2, n)
        assert rep.total == closed, f"n={n}: {rep.total} != {closed}"
        assert type_one + type_two == Fraction(2) ** (1 - n)
        assert rep.type_I == float(type_one)
        assert rep.type_II == float(type_two)
    report(6, True, "totals equal 2^(1-n) for n = 2..10, rational enumeration agrees")


def test_criterion_07():
    # the ratio test is never beaten by any empty-count threshold rule
    worst = -math.inf
    for m in range(2, 21):
        base = math.ceil(m * math.log(m))
        for n in sorted({m, base, 3 * base}):
            rep = exact_lrt_risk(m, n)
            null_probs = empty_count_distribution(m, n).probs
            alt_probs = empty_count_distribution(m - 1, n).probs
            for t in range(0, m + 2):
                # reject when the observed empty count is >= t; under the
                # mixture the deleted sphere is always empty, so k >= 1
                type_one = float(null_probs[t:].sum())
                type_two = float(alt_probs[: max(0, t - 1)].sum())
                margin = rep.total - (type_one + type_two)
                worst = max(worst, margin)
    ok = worst <= 1e-12
    report(7, ok, f"max(ratio-test total - threshold total) = {worst:.3e}")
    assert ok


def test_criterion_08():
    # float occupancy engine matches the exact rational law everywhere small
    worst = 0.0
    for m in range(1, 6):
        for n in range(0, 11):
            law = empty_count_distribution(m, n)
            exact = oracles.empty_count_law(m, n)
            for k in range(m + 1):
                worst = max(worst, abs(law.probs[k] - float(exact[k])))
            worst = max(worst, abs(prob_all_occupied(m, n) - float(exact[0])))
    ok = worst <= 1e-12
    report(8, ok, f"max |float - rational| = {worst:.3e} over m <= 5, n <= 10")
    assert ok


def test_criterion_09():
    # plug-in homology test on the 4-sphere pack: risk at n = 400 is at most
    # 0.05 over 200 trials, and the log of the estimated risk falls with
    # slope within a factor two of -1/m across n in {50, 100, 200, 400}
    base = TrialConfig(
        intrinsic_dim=1,
        ambient_dim=2,
        radius=M4_RADIUS,
        n=400,
        trials=200,
        master_seed=404,
        test_kind="estimator",
        scale=M4_RADIUS,
    )
    risk_400 = mc_risk(base).risk_hat

    sizes = (50, 100, 200, 400)
    risks = [mc_risk(replace(base, n=n, trials=500, master_seed=500 + n)).risk_hat for n in sizes]
    positive = [(n, r) for n, r in zip(sizes, risks) if r > 0.0]
    slope = float(
        np.polyfit([n for n, _ in positive], [math.log(r) for _, r in positive], 1)[0]
    )
    lo, hi = -2.0 / 4, -1.0 / (2 * 4)
    ok = risk_400 <= 0.05 and lo <= slope <= hi
    report(
        9,
        ok,
        f"risk(400)={risk_400:.4f}, risks={['%.4f' % r for r in risks]}, "
        f"slope={slope:.4f}, band [{lo}, {hi}]",
    )
    assert risk_400 <= 0.05
    assert lo <= slope <= hi, "log-risk slope must sit within a factor two of -1/m"


def test_criterion_10():
    # reference complexes with known answers, then the alternating-sum
    # identity between simplex counts and ranks on random clouds
    triangle = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    profile = betti(rips(triangle, scale=1.1, max_dim=2))
    assert profile.betti[0] == 1 and profile.betti[1] == 0

    angles = 2.0 * math.pi * np.arange(8) / 8
    circle = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    profile = betti(rips(circle, scale=0.8, max_dim=2))
    assert profile.betti[0] == 1 and profile.betti[1] == 1

    two = np.vstack([triangle, triangle + np.array([10.0, 0.0])])
    profile = betti(rips(two, scale=1.1, max_dim=2))
    assert profile.betti[0] == 2

    rng = np.random.default_rng(10)
    for _ in range(200):
        pts = rng.random((int(rng.integers(2, 13)), int(rng.integers(1, 4))))
        complex_ = rips(pts, scale=float(rng.uniform(0.1, 1.2)), max_dim=3)
        profile = betti(complex_)
        counts = [len(complex_.simplices[q]) for q in range(4)]
        from_counts = sum((-1) ** q * c for q, c in enumerate(counts))
        from_betti = sum((-1) ** q * b for q, b in enumerate(profile.betti))
        assert from_counts == from_betti == profile.euler_characteristic
    report(10, True, "triangle, circle, disjoint pair exact; Euler identity on 200 clouds")


def test_criterion_11():
    # byte-identical command line output for a fixed seed, thread count varied
    cases = [
        ("risk-mc", "--d", "1", "--D", "2", "--tau", "0.00390625",
         "--n", "311", "--trials", "500", "--seed", "11", "--test", "lrt"),
        ("risk-mc", "--d", "1", "--D", "2", "--tau", "0.15",
         "--n", "80", "--trials", "60", "--seed", "11", "--test", "estimator",
         "--scale", "0.15"),
    ]
    for args in cases:
        outputs = []
        for threads in ("1", "4"):
            env = {**os.environ, "OMP_NUM_THREADS": threads}
            for _ in range(2):
                proc = subprocess.run(
                    [sys.executable, "-m", "homrisk", *args],
                    capture_output=True,
                    text=True,
                    env=env,
                )
                assert proc.returncode == 0
                outputs.append(proc.stdout)
        assert len(set(outputs)) == 1, f"outputs diverged for {args[0]} {args[-1]}"
    report(11, True, "4 repeats x 2 thread counts byte-identical for both test kinds")
