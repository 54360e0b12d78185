"""Exact conditional (fixed-environment) laws.

Given the weights, the depth of vertex n with unit edge lengths is
1 + a sum of independent Bernoulli(p_j(j)) indicators, so its pmf is a shifted
Poisson-binomial; the outdegree of v(j) is likewise a Poisson-binomial over
attachment indicators with probabilities w(j)/W_k, k = j..n-1.  This module
computes those pmfs by direct convolution DP, conditional means in log-space,
and the characteristic function of the weighted depth.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .env import Environment
from .errors import DomainError, ResourceLimitError
from .treegrow import EdgeLenSpec
from .walk import WalkPath, argmin_leftmost

__all__ = [
    "Pmf", "exact_depth_pmf", "exact_outdeg_pmf", "cond_mean_depth",
    "cond_mean_outdegree", "cond_mean_outdegree_many", "CondOutdegReport",
    "char_fn", "texpect_statistic", "eta_sum_statistic", "save_pmf_csv",
]

PMF_SIZE_CAP = 20000


@dataclass
class Pmf:
    """Discrete law on consecutive integers support[0] .. support[-1]."""

    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        if self.support.shape != self.mass.shape:
            raise DomainError("pmf support and mass must align")

    @property
    def mean(self) -> float:
        return math.fsum(float(s) * float(m) for s, m in zip(self.support, self.mass))

    def cdf_at(self, x: float) -> float:
        return float(self.mass[self.support <= x].sum())

    def total(self) -> float:
        return math.fsum(float(m) for m in self.mass)


def _poisson_binomial(probs: np.ndarray, cap: int) -> np.ndarray:
    if probs.shape[0] > cap:
        raise ResourceLimitError(
            f"exact pmf over {probs.shape[0]} indicators exceeds cap {cap}; "
            "raise the cap knowingly or use the sampling paths")
    return kernels.poisson_binomial_pmf(probs)


def exact_depth_pmf(env: Environment, n: int, cap: int = PMF_SIZE_CAP) -> Pmf:
    """Unit-edge depth law of vertex n: support 1..n (support {0} when n = 0)."""
    if not (0 <= n <= env.n):
        raise DomainError(f"exact_depth_pmf needs 0 <= n <= env.n, got n={n}")
    if n == 0:
        return Pmf(support=np.array([0]), mass=np.array([1.0]))
    p = np.exp(env.logw[1:n] - env.log_prefix_mass[1:n])
    mass = _poisson_binomial(p, cap)
    return Pmf(support=np.arange(1, n + 1), mass=mass)


def exact_outdeg_pmf(env: Environment, n: int, j: int,
                     cap: int = PMF_SIZE_CAP) -> Pmf:
    """Law of the outdegree of v(j) in the n-step tree: support 0..n-j."""
    if not (0 <= j <= n <= env.n):
        raise DomainError(f"exact_outdeg_pmf needs 0 <= j <= n <= env.n")
    p = np.exp(env.logw[j] - env.log_prefix_mass[j:n])
    mass = _poisson_binomial(p, cap)
    return Pmf(support=np.arange(0, n - j + 1), mass=mass)


def cond_mean_depth(env: Environment, n: int) -> float:
    """E_w D_n with unit edges: 1 + sum_{j=1}^{n-1} p_j(j), summed exactly."""
    if not (0 <= n <= env.n):
        raise DomainError(f"cond_mean_depth needs 0 <= n <= env.n, got n={n}")
    if n == 0:
        return 0.0
    p = np.exp(env.logw[1:n] - env.log_prefix_mass[1:n])
    return 1.0 + math.fsum(p.tolist())


def cond_mean_outdegree(env: Environment, n: int, j: int) -> float:
    """E_w N_n(j) = w(j) * sum_{k=j}^{n-1} 1/W_k, summed in exact log terms."""
    if not (0 <= j <= n <= env.n):
        raise DomainError(f"cond_mean_outdegree needs 0 <= j <= n <= env.n")
    if j == n:
        return 0.0
    terms = np.exp(env.logw[j] - env.log_prefix_mass[j:n])
    return math.fsum(terms.tolist())


class CondOutdegReport(NamedTuple):
    j: np.ndarray
    mean: np.ndarray


def cond_mean_outdegree_many(env: Environment, n: int, js=None) -> CondOutdegReport:
    """E_w N_n(j) for many j at once via a backward suffix log-sum-exp.

    Each answer is exp(logw[j] + logsumexp_{k=j..n-1}(-logW_k)) and stays
    finite for any environment because every summand w(j)/W_k is at most 1.
    """
    if not (0 <= n <= env.n):
        raise DomainError(f"cond_mean_outdegree_many needs 0 <= n <= env.n")
    if js is None:
        js = np.arange(n)
    js = np.asarray(js, dtype=np.int64)
    if js.size and not (js.min() >= 0 and js.max() <= n):
        raise DomainError("every j must satisfy 0 <= j <= n")
    if n == 0:
        return CondOutdegReport(j=js, mean=np.zeros(js.shape))
    # suffix[j] = log sum_{k=j}^{n-1} exp(-logW_k)
    rev = kernels.logaddexp_accumulate(-env.log_prefix_mass[n - 1::-1])
    suffix = rev[::-1]
    mean = np.zeros(js.shape)
    inside = js < n
    mean[inside] = np.exp(env.logw[js[inside]] + suffix[js[inside]])
    return CondOutdegReport(j=js, mean=mean)


def char_fn(env: Environment, n: int, lens, t: float) -> complex:
    """Conditional characteristic function of the depth of vertex n.

    phi_n(t) = f_n(t) * prod_{j=1}^{n-1} (1 + (f_j(t) - 1) p_j(j)) where
    f_j is the characteristic function of the j-th edge length.  ``lens`` is
    an EdgeLenSpec (i.i.d. lengths) or a callable (j, t) -> complex.
    """
    if not (1 <= n <= env.n):
        raise DomainError(f"char_fn needs 1 <= n <= env.n, got n={n}")
    if isinstance(lens, EdgeLenSpec):
        f = lambda j, tt: lens.char_fn(tt)
    elif callable(lens):
        f = lens
    else:
        raise DomainError("lens must be an EdgeLenSpec or a callable (j, t) -> complex")
    p = np.exp(env.logw[1:n] - env.log_prefix_mass[1:n])
    fvals = np.array([f(j, t) for j in range(1, n)], dtype=np.complex128)
    return complex(f(n, t) * np.prod(1.0 + (fvals - 1.0) * p))


def texpect_statistic(path: WalkPath, n: int, j: int) -> float:
    """e^{S_j - S_tau(n)} E_w N_n(j) / (n - j) for product-form weights.

    tau(n) is the leftmost argmin of the walk on 0..n.  Computed wholly in
    log-space: exp(logw[tau] + log sum_{k=j}^{n-1} exp(-logW_k) - log(n - j)).
    """
    if not (0 <= j < n <= path.n):
        raise DomainError(f"texpect_statistic needs 0 <= j < n <= path.n")
    logw = -path.s[:n + 1]
    lpm = kernels.logaddexp_accumulate(logw)
    rev = kernels.logaddexp_accumulate(-lpm[n - 1:j - 1 if j else None:-1])
    suffix_j = rev[-1]
    tau = argmin_leftmost(path, n)
    return float(np.exp(logw[tau] + suffix_j - math.log(n - j)))


def eta_sum_statistic(path: WalkPath, n: int) -> float:
    """1 / sum_{k=0}^n e^{S_tau(n) - S_k}, the natural companion scale."""
    if not (0 <= n <= path.n):
        raise DomainError(f"eta_sum_statistic needs 0 <= n <= path.n")
    s = path.s[:n + 1]
    tau = argmin_leftmost(path, n)
    return float(1.0 / np.exp(s[tau] - s).sum())


def save_pmf_csv(pmf: Pmf, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value", "mass"])
        for v, m in zip(pmf.support, pmf.mass):
            writer.writerow([int(v), format(float(m), ".17g")])
