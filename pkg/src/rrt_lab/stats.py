"""Distribution-distance and estimation helpers used by the experiments.

Nothing here knows about trees; it is plain empirical-process machinery:
Kolmogorov-Smirnov distances (continuous, discrete, two-sample), total
variation between integer pmfs, log-log slope fits, mean confidence
intervals, and a chi-square uniformity check.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "EmpiricalDist", "ks_distance", "ks_distance_discrete", "ks_two_sample",
    "tv_distance", "loglog_slope", "FitReport", "mean_with_ci", "MeanCI",
    "chi_square_uniformity", "ks_critical_value", "ks_critical_value_two_sample",
]


class EmpiricalDist:
    """Sorted-sample empirical cdf."""

    def __init__(self, samples):
        x = np.asarray(samples, dtype=np.float64)
        if x.ndim != 1 or x.size == 0:
            raise DomainError("need a nonempty 1-d sample")
        if not np.all(np.isfinite(x)):
            raise DomainError("samples must be finite")
        self.x = np.sort(x)
        self.m = x.size

    def cdf(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return np.searchsorted(self.x, t, side="right") / self.m


def ks_distance(samples, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """sup_x |F_m(x) - F(x)| against a continuous reference cdf.

    The supremum over each constancy interval of the empirical cdf is attained
    at a sample point, from the left or the right, so both one-sided gaps are
    scanned at the order statistics.
    """
    emp = EmpiricalDist(samples)
    f = np.asarray(cdf(emp.x), dtype=np.float64)
    i = np.arange(1, emp.m + 1)
    d_plus = np.max(i / emp.m - f)
    d_minus = np.max(f - (i - 1) / emp.m)
    return float(max(d_plus, d_minus, 0.0))


def ks_distance_discrete(samples, support, mass) -> float:
    """sup_x |F_m(x) - F(x)| for an integer-supported reference law.

    Checked at every support atom (cdf from the right) and just below it
    (cdf from the left); for lattice laws the sup is attained there.
    """
    support = np.asarray(support, dtype=np.float64)
    mass = np.asarray(mass, dtype=np.float64)
    emp = EmpiricalDist(samples)
    ref_cdf = np.cumsum(mass)
    emp_at = emp.cdf(support)
    emp_below = np.searchsorted(emp.x, support, side="left") / emp.m
    ref_below = ref_cdf - mass
    d_at = np.max(np.abs(emp_at - ref_cdf))
    d_below = np.max(np.abs(emp_below - ref_below))
    return float(max(d_at, d_below))


def ks_two_sample(a, b) -> float:
    """sup over the merged grid of |F_a - F_b|."""
    ea, eb = EmpiricalDist(a), EmpiricalDist(b)
    grid = np.concatenate([ea.x, eb.x])
    return float(np.max(np.abs(ea.cdf(grid) - eb.cdf(grid))))


def tv_distance(support_a, mass_a, support_b, mass_b) -> float:
    """Total variation 0.5 * sum |p - q| over the union support."""
    sa = np.asarray(support_a, dtype=np.int64)
    sb = np.asarray(support_b, dtype=np.int64)
    union = np.union1d(sa, sb)
    pa = np.zeros(union.shape)
    pb = np.zeros(union.shape)
    pa[np.searchsorted(union, sa)] = mass_a
    pb[np.searchsorted(union, sb)] = mass_b
    return float(0.5 * np.abs(pa - pb).sum())


class FitReport(NamedTuple):
    slope: float
    intercept: float
    stderr: float


def loglog_slope(x, y) -> FitReport:
    """Least-squares slope of log y against log x."""
    with np.errstate(invalid="ignore", divide="ignore"):
        lx = np.log(np.asarray(x, dtype=np.float64))
        ly = np.log(np.asarray(y, dtype=np.float64))
    if lx.shape != ly.shape or lx.ndim != 1 or lx.size < 2:
        raise DomainError("need matching 1-d arrays with at least two points")
    if not (np.all(np.isfinite(lx)) and np.all(np.isfinite(ly))):
        raise DomainError("log-log fit needs positive finite inputs")
    m = lx.size
    vx = lx - lx.mean()
    slope = float(np.dot(vx, ly) / np.dot(vx, vx))
    intercept = float(ly.mean() - slope * lx.mean())
    if m == 2:
        return FitReport(slope, intercept, 0.0)
    resid = ly - (intercept + slope * lx)
    s2 = float(np.dot(resid, resid) / (m - 2))
    return FitReport(slope, intercept, math.sqrt(s2 / float(np.dot(vx, vx))))


class MeanCI(NamedTuple):
    mean: float
    low: float
    high: float
    stderr: float


def mean_with_ci(samples, level: float = 0.95) -> MeanCI:
    """Normal-approximation confidence interval for the mean."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("need at least two samples")
    if not (0.0 < level < 1.0):
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    m = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.size))
    z = float(special.ndtri(0.5 + level / 2.0))
    return MeanCI(m, m - z * se, m + z * se, se)


def chi_square_uniformity(samples, k: int = 20) -> float:
    """p-value of a k-bin chi-square test that samples are Uniform(0, 1)."""
    x = np.asarray(samples, dtype=np.float64)
    if k < 2:
        raise DomainError(f"need at least 2 bins, got {k}")
    if x.size < 5 * k:
        raise DomainError(f"need at least {5 * k} samples for {k} bins, got {x.size}")
    if np.any(x < 0) or np.any(x > 1):
        raise DomainError("samples must lie in [0, 1]")
    counts, _ = np.histogram(x, bins=k, range=(0.0, 1.0))
    expected = x.size / k
    stat = float(((counts - expected) ** 2 / expected).sum())
    return float(special.gammaincc((k - 1) / 2.0, stat / 2.0))


def ks_critical_value(m: int, alpha: float = 0.01) -> float:
    """One-sample DKW-style threshold sqrt(log(2/alpha) / (2 m))."""
    if m < 1 or not (0.0 < alpha < 1.0):
        raise DomainError("need m >= 1 and alpha in (0, 1)")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * m))


def ks_critical_value_two_sample(m: int, k: int, alpha: float = 0.01) -> float:
    if m < 1 or k < 1 or not (0.0 < alpha < 1.0):
        raise DomainError("need m, k >= 1 and alpha in (0, 1)")
    return math.sqrt(math.log(2.0 / alpha) * (m + k) / (2.0 * m * k))
