"""Empirical-process helpers: KS distances, TV, slope fits, CIs, chi-square.

Each distance gets tiny hand-computable cases where the supremum can be read
off directly, plus calibration checks: the KS threshold rejects a wrong law
and accepts the right one, and the chi-square p-value is roughly uniform
under the null.
"""
import math

import numpy as np
import pytest
from scipy import special

from rrt_lab.errors import DomainError
from rrt_lab.rng import stream
from rrt_lab.stats import (EmpiricalDist, chi_square_uniformity,
                           ks_critical_value, ks_critical_value_two_sample,
                           ks_distance, ks_distance_discrete, ks_two_sample,
                           loglog_slope, mean_with_ci, tv_distance)


# ---------------------------------------------------------------------------
# empirical cdf
# ---------------------------------------------------------------------------

def test_empirical_dist_validation():
    with pytest.raises(DomainError):
        EmpiricalDist([])
    with pytest.raises(DomainError):
        EmpiricalDist([[1.0, 2.0]])
    with pytest.raises(DomainError):
        EmpiricalDist([1.0, math.nan])
    with pytest.raises(DomainError):
        EmpiricalDist([1.0, math.inf])


def test_empirical_cdf_steps():
    emp = EmpiricalDist([3.0, 1.0, 2.0])
    assert emp.cdf(0.5) == 0.0
    assert emp.cdf(1.0) == pytest.approx(1 / 3)   # right-continuous
    assert emp.cdf(1.5) == pytest.approx(1 / 3)
    assert emp.cdf(3.0) == 1.0
    np.testing.assert_allclose(emp.cdf([0.0, 2.0, 9.0]), [0.0, 2 / 3, 1.0])


# ---------------------------------------------------------------------------
# one-sample KS, continuous reference
# ---------------------------------------------------------------------------

def test_ks_distance_single_point():
    # one sample at the median: cdf jumps 0 -> 1 across F = 1/2, gap 1/2 on
    # both sides
    assert ks_distance([0.0], lambda t: 0.5 * np.ones_like(t)) == pytest.approx(0.5)


def test_ks_distance_hand_case():
    # samples {0.2, 0.6} against Uniform(0,1):
    # at 0.2: emp jumps 0 -> 1/2, F = 0.2, gaps 0.3 and 0.2
    # at 0.6: emp jumps 1/2 -> 1, F = 0.6, gaps 0.4 and 0.1
    d = ks_distance([0.2, 0.6], lambda t: np.clip(t, 0.0, 1.0))
    assert d == pytest.approx(0.4)


def test_ks_distance_detects_left_gap():
    # reference already saturated below the samples: just under the first
    # sample the empirical cdf is 0 while F = 1, so the sup is 1
    d = ks_distance([10.0, 11.0], lambda t: np.where(t >= 0.0, 1.0, 0.0))
    assert d == pytest.approx(1.0)


def test_ks_distance_calibration_uniform():
    u = stream(51, 0).random(20_000)
    d = ks_distance(u, lambda t: np.clip(t, 0.0, 1.0))
    assert d < ks_critical_value(20_000, alpha=1e-4)
    # against the wrong law (squared uniform) the distance is macroscopic:
    # sup_t |t - sqrt(t)| = 1/4
    d_wrong = ks_distance(u, lambda t: np.clip(t, 0.0, 1.0) ** 2)
    assert abs(d_wrong - 0.25) < 0.02


# ---------------------------------------------------------------------------
# one-sample KS, discrete reference
# ---------------------------------------------------------------------------

def test_ks_discrete_exact_match():
    # empirical frequencies equal to the reference pmf: distance 0
    samples = [0.0] * 2 + [1.0] * 5 + [2.0] * 3
    assert ks_distance_discrete(samples, [0, 1, 2], [0.2, 0.5, 0.3]) == pytest.approx(0.0)


def test_ks_discrete_hand_case():
    # all mass observed at 1 against a fair coin on {0, 1}: below the atom 1
    # the empirical cdf is 0 while the reference is 1/2
    assert ks_distance_discrete([1.0, 1.0], [0, 1], [0.5, 0.5]) == pytest.approx(0.5)


def test_ks_discrete_shifted_support():
    # reference on {0,1}, samples at {2}: at atom 1 cdf gap is 1 - 0 = 1
    assert ks_distance_discrete([2.0], [0, 1], [0.5, 0.5]) == pytest.approx(1.0)


def test_ks_discrete_binomial_calibration():
    g = stream(51, 1)
    n, p, reps = 8, 0.3, 20_000
    samples = g.binomial(n, p, size=reps).astype(np.float64)
    support = np.arange(n + 1)
    mass = np.array([math.comb(n, k) * p ** k * (1 - p) ** (n - k)
                     for k in support])
    assert ks_distance_discrete(samples, support, mass) < ks_critical_value(
        reps, alpha=1e-4)
    # wrong parameter is rejected at the same threshold
    mass_wrong = np.array([math.comb(n, k) * 0.5 ** n for k in support])
    assert ks_distance_discrete(samples, support, mass_wrong) > 0.2


# ---------------------------------------------------------------------------
# two-sample KS
# ---------------------------------------------------------------------------

def test_ks_two_sample_identical():
    a = [1.0, 2.0, 3.0]
    assert ks_two_sample(a, a) == 0.0


def test_ks_two_sample_disjoint():
    assert ks_two_sample([0.0, 1.0], [5.0, 6.0]) == pytest.approx(1.0)


def test_ks_two_sample_hand_case():
    # a = {1, 3}, b = {2}: just below 2 the cdfs are 1/2 vs 0
    assert ks_two_sample([1.0, 3.0], [2.0]) == pytest.approx(0.5)


def test_ks_two_sample_symmetry():
    a = stream(51, 2).random(500)
    b = stream(51, 3).random(700) * 1.1
    assert ks_two_sample(a, b) == pytest.approx(ks_two_sample(b, a))


# ---------------------------------------------------------------------------
# total variation
# ---------------------------------------------------------------------------

def test_tv_identical_and_disjoint():
    assert tv_distance([0, 1], [0.5, 0.5], [0, 1], [0.5, 0.5]) == 0.0
    assert tv_distance([0], [1.0], [1], [1.0]) == pytest.approx(1.0)


def test_tv_hand_case():
    # p = (0.2, 0.8) on {0,1}, q = (0.5, 0.5): 0.5 * (0.3 + 0.3) = 0.3
    assert tv_distance([0, 1], [0.2, 0.8], [0, 1], [0.5, 0.5]) == pytest.approx(0.3)


def test_tv_union_support():
    # supports overlap only at 1
    d = tv_distance([0, 1], [0.4, 0.6], [1, 2], [0.1, 0.9])
    assert d == pytest.approx(0.5 * (0.4 + 0.5 + 0.9))


# ---------------------------------------------------------------------------
# log-log slope
# ---------------------------------------------------------------------------

def test_loglog_slope_exact_power_law():
    x = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    y = 3.0 * x ** 1.7
    fit = loglog_slope(x, y)
    assert fit.slope == pytest.approx(1.7, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
    assert fit.stderr == pytest.approx(0.0, abs=1e-12)


def test_loglog_slope_two_points():
    fit = loglog_slope([1.0, 10.0], [2.0, 2000.0])
    assert fit.slope == pytest.approx(3.0)
    assert fit.stderr == 0.0


def test_loglog_slope_stderr_reflects_noise():
    g = stream(52, 0)
    x = np.logspace(0, 3, 30)
    y = x ** -0.5 * np.exp(0.05 * g.standard_normal(30))
    fit = loglog_slope(x, y)
    assert abs(fit.slope - (-0.5)) < 5 * fit.stderr + 1e-3
    assert fit.stderr > 0.0


def test_loglog_slope_validation():
    with pytest.raises(DomainError):
        loglog_slope([1.0], [2.0])
    with pytest.raises(DomainError):
        loglog_slope([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        loglog_slope([1.0, -2.0], [1.0, 2.0])   # log of a negative
    with pytest.raises(DomainError):
        loglog_slope([1.0, 2.0], [0.0, 2.0])    # log of zero


# ---------------------------------------------------------------------------
# mean confidence interval
# ---------------------------------------------------------------------------

def test_mean_with_ci_hand_case():
    # samples (0, 2): mean 1, sd 2^{1/2}, se 1;  95% z = ndtri(0.975)
    ci = mean_with_ci([0.0, 2.0])
    z = float(special.ndtri(0.975))
    assert ci.mean == pytest.approx(1.0)
    assert ci.stderr == pytest.approx(1.0)
    assert ci.low == pytest.approx(1.0 - z)
    assert ci.high == pytest.approx(1.0 + z)


def test_mean_with_ci_coverage():
    # the 95% interval should cover the true mean about 95% of the time
    hits = 0
    reps = 400
    for r in range(reps):
        x = stream(52, 1000 + r).standard_normal(50) + 2.0
        ci = mean_with_ci(x)
        hits += ci.low <= 2.0 <= ci.high
    assert abs(hits / reps - 0.95) < 5 * math.sqrt(0.95 * 0.05 / reps)


def test_mean_with_ci_validation():
    with pytest.raises(DomainError):
        mean_with_ci([1.0])
    with pytest.raises(DomainError):
        mean_with_ci([1.0, 2.0], level=0.0)
    with pytest.raises(DomainError):
        mean_with_ci([1.0, 2.0], level=1.0)


# ---------------------------------------------------------------------------
# chi-square uniformity
# ---------------------------------------------------------------------------

def test_chi_square_validation():
    with pytest.raises(DomainError):
        chi_square_uniformity(stream(53, 0).random(100), k=1)
    with pytest.raises(DomainError):
        chi_square_uniformity(stream(53, 0).random(50), k=20)
    with pytest.raises(DomainError):
        chi_square_uniformity([0.5, 1.5] * 100, k=2)


def test_chi_square_matches_direct_formula():
    u = stream(53, 1).random(2_000)
    k = 10
    counts, _ = np.histogram(u, bins=k, range=(0.0, 1.0))
    stat = ((counts - 200.0) ** 2 / 200.0).sum()
    want = float(special.gammaincc((k - 1) / 2.0, stat / 2.0))
    assert chi_square_uniformity(u, k=k) == pytest.approx(want, rel=1e-12)


def test_chi_square_accepts_uniform_rejects_skew():
    u = stream(53, 2).random(50_000)
    assert chi_square_uniformity(u) > 1e-4
    assert chi_square_uniformity(u ** 2) < 1e-10


def test_chi_square_pvalue_roughly_uniform_under_null():
    # under the null the p-value is approximately Uniform(0,1); check the
    # median is not wildly off
    ps = [chi_square_uniformity(stream(53, 100 + r).random(2_000))
          for r in range(60)]
    frac_below_half = np.mean(np.array(ps) < 0.5)
    assert abs(frac_below_half - 0.5) < 5 * math.sqrt(0.25 / 60)


# ---------------------------------------------------------------------------
# critical values
# ---------------------------------------------------------------------------

def test_ks_critical_value_formula():
    assert ks_critical_value(100, 0.01) == pytest.approx(
        math.sqrt(math.log(200.0) / 200.0))
    # shrinks like m^{-1/2}
    assert ks_critical_value(400, 0.01) == pytest.approx(
        ks_critical_value(100, 0.01) / 2.0)
    with pytest.raises(DomainError):
        ks_critical_value(0)
    with pytest.raises(DomainError):
        ks_critical_value(10, alpha=1.5)


def test_ks_critical_value_two_sample_formula():
    m, k = 300, 500
    want = math.sqrt(math.log(200.0) * (m + k) / (2.0 * m * k))
    assert ks_critical_value_two_sample(m, k, 0.01) == pytest.approx(want)
    # symmetric in the two sample sizes
    assert ks_critical_value_two_sample(k, m, 0.01) == pytest.approx(want)
    with pytest.raises(DomainError):
        ks_critical_value_two_sample(0, 10)


def test_ks_calibration_two_sample():
    a = stream(54, 0).random(5_000)
    b = stream(54, 1).random(5_000)
    assert ks_two_sample(a, b) < ks_critical_value_two_sample(5_000, 5_000, 1e-4)
