"""Closed-form limit laws the simulations are checked against.

* the law of max_{0<=t<=1} B(t) for a standard Brownian motion (half-normal),
* the generalized arcsine law with positivity parameter rho,
* limiting mean-outdegree profiles for power-type and constant weights,
* estimation of the scale constant sigma_m from samples of the normalized
  depth-mean statistic zeta_n (robust quantile matching, since zeta_n
  converges to sigma_m times the maximum of a Brownian motion).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import ConfigurationError, DomainError
from .rng import stream
from .walk import IncrementSpec

__all__ = [
    "max_bm_cdf", "max_bm_tail", "max_bm_quantile", "arcsine_cdf",
    "arcsine_density", "outdeg_profile", "constant_weight_profile",
    "LimitLaw", "SigmaMEstimate", "sigma_m_from_zeta", "estimate_sigma_m",
]


def max_bm_cdf(x) -> np.ndarray:
    """P(max_{0<=t<=1} B(t) <= x) = 2 Phi(x) - 1 for x >= 0 (0 below)."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < 0.0, 0.0, special.erf(x / math.sqrt(2.0)))


def max_bm_tail(x) -> np.ndarray:
    """P(max B > x) = 2(1 - Phi(x)) for x >= 0 (1 below)."""
    x = np.asarray(x, dtype=np.float64)
    return np.where(x < 0.0, 1.0, special.erfc(x / math.sqrt(2.0)))


def max_bm_quantile(q: float) -> float:
    """Inverse of max_bm_cdf on (0, 1)."""
    if not (0.0 < q < 1.0):
        raise DomainError(f"quantile level must lie in (0, 1), got {q}")
    return float(special.ndtri((1.0 + q) / 2.0))


def arcsine_cdf(x, rho: float = 0.5) -> np.ndarray:
    """Generalized arcsine cdf: regularized incomplete beta I_x(rho, 1 - rho).

    At rho = 1/2 this is the classical (2/pi) arcsin(sqrt x).
    """
    if not (0.0 < rho < 1.0):
        raise DomainError(f"positivity parameter rho must lie in (0, 1), got {rho}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("arcsine law lives on [0, 1]")
    return special.betainc(rho, 1.0 - rho, x)


def arcsine_density(x, rho: float = 0.5) -> np.ndarray:
    if not (0.0 < rho < 1.0):
        raise DomainError(f"positivity parameter rho must lie in (0, 1), got {rho}")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0) or np.any(x >= 1.0):
        raise DomainError("arcsine density needs x in (0, 1)")
    c = math.sin(math.pi * rho) / math.pi
    return c * x ** (rho - 1.0) * (1.0 - x) ** (-rho)


def outdeg_profile(t, rho: float) -> np.ndarray:
    """Limit of E N_n(tn) / log-free scale for power-type attachment.

    (sin(pi rho) / (pi rho)) * ((1 - t) / t)^rho on t in (0, 1).
    """
    if not (0.0 < rho < 1.0):
        raise DomainError(f"profile exponent rho must lie in (0, 1), got {rho}")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise DomainError("profile is defined for t in (0, 1)")
    c = math.sin(math.pi * rho) / (math.pi * rho)
    return c * ((1.0 - t) / t) ** rho


def constant_weight_profile(t) -> np.ndarray:
    """Limit of E N_n(tn) for constant weights: -log t on (0, 1]."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(t <= 0.0) or np.any(t > 1.0):
        raise DomainError("constant-weight profile is defined for t in (0, 1]")
    return -np.log(t)


@dataclass(frozen=True)
class LimitLaw:
    """Tag for which limit a dataset should be compared against."""

    kind: str          # "max_bm" | "arcsine"
    rho: float = 0.5

    def cdf(self, x) -> np.ndarray:
        if self.kind == "max_bm":
            return max_bm_cdf(x)
        if self.kind == "arcsine":
            return arcsine_cdf(x, self.rho)
        raise ConfigurationError(f"unknown limit law {self.kind!r}")


class SigmaMEstimate(NamedTuple):
    value: float
    ci_low: float
    ci_high: float
    quantile: float
    reps: int


def sigma_m_from_zeta(samples, quantile: float = 0.5) -> SigmaMEstimate:
    """Estimate sigma_m by matching a quantile of zeta samples.

    zeta_n converges to sigma_m * max B, whose q-quantile is
    ndtri((1+q)/2), so sigma_m ~= Q_hat(q) / ndtri((1+q)/2).  A distribution-
    free order-statistic interval around the sample quantile gives the CI.
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    m = x.size
    if m < 100:
        raise ConfigurationError(f"need at least 100 zeta samples, got {m}")
    if not (0.0 < quantile < 1.0):
        raise DomainError(f"quantile must lie in (0, 1), got {quantile}")
    denom = max_bm_quantile(quantile)
    k = int(math.ceil(quantile * m)) - 1
    z99 = float(special.ndtri(0.995))
    half = z99 * math.sqrt(quantile * (1.0 - quantile) * m)
    lo = min(max(int(math.floor(quantile * m - half)), 0), m - 1)
    hi = min(max(int(math.ceil(quantile * m + half)), 0), m - 1)
    return SigmaMEstimate(
        value=float(x[k] / denom),
        ci_low=float(x[lo] / denom),
        ci_high=float(x[hi] / denom),
        quantile=quantile,
        reps=m,
    )


def estimate_sigma_m(spec: IncrementSpec, n: int, reps: int, seed: int,
                     quantile: float = 0.5, rep_offset: int = 0) -> SigmaMEstimate:
    """Monte Carlo sigma_m for product-form weights driven by ``spec``.

    Draws ``reps`` independent walk environments (one counter-based stream per
    replicate so results do not depend on batching), computes
    zeta_n = n^{-1/2} sum_j p_j(j) for each and quantile-matches.
    """
    if n < 1 or reps < 1:
        raise DomainError("need n >= 1 and reps >= 1")
    zetas = np.empty(reps)
    batch = max(1, int(4_000_000 // max(n, 1)))
    for lo in range(0, reps, batch):
        hi = min(lo + batch, reps)
        steps = np.empty((hi - lo, n))
        for i in range(lo, hi):
            steps[i - lo] = spec.sample(stream(seed, rep_offset + i), n)
        # logw[j] = -S_j for j = 1..n with w(0) = 1; logW via streaming logsumexp
        logw = np.concatenate([np.zeros((hi - lo, 1)), -np.cumsum(steps, axis=1)], axis=1)
        lpm = np.logaddexp.accumulate(logw, axis=1)
        zetas[lo:hi] = np.exp(logw[:, 1:] - lpm[:, 1:]).sum(axis=1) / math.sqrt(n)
    return sigma_m_from_zeta(zetas, quantile)
