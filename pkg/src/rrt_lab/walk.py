"""Random-walk driver: increment specifications, path sampling and the
fluctuation functionals (running extrema, leftmost argmin, ladder epochs) plus
estimators for the positivity parameter rho and the lattice return-mass phi.

A path is S_0 = 0, S_k = theta_1 + ... + theta_k.  All operations are pure
given an explicit numpy Generator, so paths and functionals are safe to share
across replicate workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import ndtri

from .errors import ConfigurationError, DomainError

__all__ = [
    "IncrementSpec", "WalkPath", "LadderReport", "RhoEstimate", "PhiEstimate",
    "sample_path", "running_min", "running_max_variants", "argmin_leftmost",
    "ladder_epochs", "estimate_rho", "estimate_phi",
]


@dataclass(frozen=True)
class IncrementSpec:
    """Distribution of one walk increment theta.

    Use the classmethod constructors; they validate parameters.  ``lattice``
    declares whether P(S_j = 0) can be positive (it is declared, never
    inferred: for non-lattice specs the return mass is 0 by fiat).
    """

    kind: str
    sigma: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    p0: float = 0.0
    values: tuple[float, ...] | None = None
    probs: tuple[float, ...] | None = None
    lattice: bool = False

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> "IncrementSpec":
        if not (sigma > 0 and math.isfinite(sigma)):
            raise ConfigurationError(f"gaussian sigma must be positive, got {sigma}")
        return cls(kind="gaussian", sigma=float(sigma))

    @classmethod
    def rademacher(cls) -> "IncrementSpec":
        return cls(kind="rademacher", lattice=True)

    @classmethod
    def lattice_with_atom(cls, p0: float) -> "IncrementSpec":
        """theta = 0 with probability p0, else +-1 with equal mass.

        p0 = 1 is allowed so the degenerate all-zero walk is representable;
        estimate_phi reports divergence for it instead of summing.
        """
        if not (0.0 <= p0 <= 1.0):
            raise ConfigurationError(f"p0 must lie in [0, 1], got {p0}")
        return cls(kind="lattice_with_atom", p0=float(p0), lattice=True)

    @classmethod
    def stable(cls, alpha: float, beta: float = 0.0) -> "IncrementSpec":
        if not (0.0 < alpha < 2.0):
            raise ConfigurationError(f"stable alpha must lie in (0, 2), got {alpha}")
        if not (-1.0 <= beta <= 1.0):
            raise ConfigurationError(f"stable beta must lie in [-1, 1], got {beta}")
        return cls(kind="stable", alpha=float(alpha), beta=float(beta))

    @classmethod
    def custom_table(cls, values, probs, lattice: bool = False) -> "IncrementSpec":
        values = tuple(float(v) for v in values)
        probs = tuple(float(p) for p in probs)
        if len(values) == 0 or len(values) != len(probs):
            raise ConfigurationError("custom_table needs matching nonempty values/probs")
        if any(not math.isfinite(v) for v in values):
            raise ConfigurationError("custom_table values must be finite")
        if any(p < 0 for p in probs) or abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ConfigurationError("custom_table probs must be >= 0 and sum to 1")
        return cls(kind="custom_table", values=values, probs=probs, lattice=bool(lattice))

    @property
    def variance(self) -> float | None:
        """E theta^2 when finite, None for stable increments."""
        if self.kind == "gaussian":
            return self.sigma ** 2
        if self.kind == "rademacher":
            return 1.0
        if self.kind == "lattice_with_atom":
            return 1.0 - self.p0
        if self.kind == "custom_table":
            m1 = math.fsum(p * v for p, v in zip(self.probs, self.values))
            m2 = math.fsum(p * v * v for p, v in zip(self.probs, self.values))
            return m2 - m1 * m1
        return None

    @property
    def degenerate_at_zero(self) -> bool:
        """True when P(theta = 0) = 1, i.e. the walk never moves."""
        if self.kind == "lattice_with_atom":
            return self.p0 >= 1.0
        if self.kind == "custom_table":
            return all(v == 0.0 for v, p in zip(self.values, self.probs) if p > 0)
        return False

    def sample(self, gen: np.random.Generator, size) -> np.ndarray:
        """Draw increments.  The per-variate stream consumption is fixed per kind."""
        if self.kind == "gaussian":
            return gen.normal(0.0, self.sigma, size)
        if self.kind == "rademacher":
            u = gen.random(size)
            return np.where(u < 0.5, -1.0, 1.0)
        if self.kind == "lattice_with_atom":
            u = gen.random(size)
            half = self.p0 + 0.5 * (1.0 - self.p0)
            return np.where(u < self.p0, 0.0, np.where(u < half, -1.0, 1.0))
        if self.kind == "stable":
            return _sample_stable(gen, self.alpha, self.beta, size)
        if self.kind == "custom_table":
            u = gen.random(size)
            cum = np.cumsum(self.probs)
            cum[-1] = 1.0
            idx = np.searchsorted(cum, u, side="right")
            return np.asarray(self.values, dtype=np.float64)[idx]
        raise ConfigurationError(f"unknown increment kind {self.kind!r}")


def _sample_stable(gen, alpha, beta, size):
    """Chambers-Mallows-Stuck sampler; draws (U, W) per variate in that order."""
    u = math.pi * (gen.random(size) - 0.5)
    w = gen.standard_exponential(size)
    if alpha == 1.0:
        hp = math.pi / 2
        x = (hp + beta * u) * np.tan(u) - beta * np.log((hp * w * np.cos(u)) / (hp + beta * u))
        return (2.0 / math.pi) * x
    t = beta * math.tan(math.pi * alpha / 2.0)
    b = math.atan(t) / alpha
    s = (1.0 + t * t) ** (1.0 / (2.0 * alpha))
    return (s * np.sin(alpha * (u + b)) / np.cos(u) ** (1.0 / alpha)
            * (np.cos(u - alpha * (u + b)) / w) ** ((1.0 - alpha) / alpha))


@dataclass
class WalkPath:
    """A trajectory S_0..S_n (s[0] must be 0)."""

    s: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=np.float64)
        if self.s.ndim != 1 or self.s.shape[0] < 1:
            raise DomainError("path must be a 1-D array with at least S_0")
        if self.s[0] != 0.0:
            raise DomainError(f"paths start at S_0 = 0, got {self.s[0]}")

    @property
    def n(self) -> int:
        return self.s.shape[0] - 1


class LadderReport(NamedTuple):
    descending_epochs: np.ndarray
    descending_heights: np.ndarray
    ascending_epochs: np.ndarray
    ascending_heights: np.ndarray


class RhoEstimate(NamedTuple):
    value: float
    ci_low: float
    ci_high: float
    level: float
    ties: int


class PhiEstimate(NamedTuple):
    value: float
    diverges: bool
    jmax: int


def sample_path(spec: IncrementSpec, n: int, gen: np.random.Generator) -> WalkPath:
    """Sample S_0..S_n (n >= 0)."""
    if n < 0:
        raise DomainError(f"path length n must be >= 0, got {n}")
    s = np.empty(n + 1)
    s[0] = 0.0
    if n:
        np.cumsum(spec.sample(gen, n), out=s[1:])
    return WalkPath(s)


def running_min(path: WalkPath) -> np.ndarray:
    """L_k = min_{0<=l<=k} S_l for k = 0..n."""
    if "rmin" not in path._cache:
        path._cache["rmin"] = np.minimum.accumulate(path.s)
    return path._cache["rmin"]


def running_max_variants(path: WalkPath):
    """(M, M~): maxima over S_0..S_k (length n+1) and over S_1..S_k (length n)."""
    if path.n == 0:
        raise DomainError("the max over S_1..S_k is undefined for n = 0")
    if "rmax" not in path._cache:
        m = np.maximum.accumulate(path.s)
        mt = np.maximum.accumulate(path.s[1:])
        path._cache["rmax"] = (m, mt)
    return path._cache["rmax"]


def argmin_leftmost(path: WalkPath, n: int | None = None) -> int:
    """tau(n): the leftmost index of the minimum of S_0..S_n.

    ``n`` defaults to the full path; np.argmin already breaks ties leftmost.
    """
    if n is None or n == path.n:
        if "argmin" not in path._cache:
            path._cache["argmin"] = int(np.argmin(path.s))
        return path._cache["argmin"]
    if not (0 <= n <= path.n):
        raise DomainError(f"argmin prefix needs 0 <= n <= path.n, got n={n}")
    return int(np.argmin(path.s[:n + 1]))


def ladder_epochs(path: WalkPath) -> LadderReport:
    """Strict descending/ascending ladder epochs, truncated at the path end.

    Epoch 0 is always included; subsequent descending epochs are the times of
    new strict minima (heights strictly decrease), ascending ones the times of
    new strict maxima.
    """
    s = path.s
    if s.shape[0] == 1:
        zero = np.zeros(1, dtype=np.int64)
        return LadderReport(zero, s[zero], zero.copy(), s[zero])
    rmin = np.minimum.accumulate(s)
    rmax = np.maximum.accumulate(s)
    desc = np.flatnonzero(np.concatenate(([True], s[1:] < rmin[:-1]))).astype(np.int64)
    asc = np.flatnonzero(np.concatenate(([True], s[1:] > rmax[:-1]))).astype(np.int64)
    return LadderReport(desc, s[desc], asc, s[asc])


def estimate_rho(spec: IncrementSpec, n: int, reps: int,
                 gen: np.random.Generator, level: float = 0.99) -> RhoEstimate:
    """Estimate rho = lim P(S_n > 0) as the fraction of endpoints above 0.

    Replicates with S_n = 0 exactly (lattice ties) are excluded from both
    numerator and denominator, which keeps symmetric specs centered on 1/2.
    The Wilson interval at ``level`` is attached.
    """
    if n < 1 or reps < 1:
        raise DomainError("estimate_rho needs n >= 1 and reps >= 1")
    if not (0.0 < level < 1.0):
        raise ConfigurationError(f"confidence level must lie in (0, 1), got {level}")
    pos = 0
    ties = 0
    done = 0
    chunk = max(1, int(4_000_000 // max(n, 1)))
    while done < reps:
        c = min(chunk, reps - done)
        endpoints = spec.sample(gen, (c, n)).sum(axis=1)
        pos += int(np.count_nonzero(endpoints > 0))
        ties += int(np.count_nonzero(endpoints == 0))
        done += c
    m = reps - ties
    if m == 0:
        raise DomainError("all replicate endpoints tied at 0; rho is undefined")
    z = float(ndtri(1.0 - (1.0 - level) / 2.0))
    phat = pos / m
    denom = 1.0 + z * z / m
    center = (phat + z * z / (2 * m)) / denom
    half = z * math.sqrt(phat * (1 - phat) / m + z * z / (4 * m * m)) / denom
    return RhoEstimate(phat, max(0.0, center - half), min(1.0, center + half), level, ties)


def estimate_phi(spec: IncrementSpec, jmax: int, reps: int | None = None,
                 gen: np.random.Generator | None = None) -> PhiEstimate:
    """Partial sum of (1/j) P(S_j = 0) up to jmax.

    Non-lattice specs return 0 immediately (return mass is 0 by declaration).
    Degenerate specs (P(theta = 0) = 1) make the sum harmonic; that is reported
    through the ``diverges`` flag, never silently summed.  For rademacher the
    return probabilities are exact binomials; other lattice specs are estimated
    by Monte Carlo (``reps`` paths from ``gen``).
    """
    if jmax < 1:
        raise DomainError(f"jmax must be >= 1, got {jmax}")
    if not spec.lattice:
        return PhiEstimate(0.0, False, jmax)
    if spec.degenerate_at_zero:
        return PhiEstimate(math.inf, True, jmax)
    if spec.kind == "rademacher":
        # P(S_{2m} = 0) = C(2m, m) 4^-m via the ratio recursion; odd j vanish.
        total = 0.0
        r = 1.0
        for m in range(1, jmax // 2 + 1):
            r *= (2 * m - 1) / (2 * m)
            total += r / (2 * m)
        return PhiEstimate(total, False, jmax)
    if reps is None or gen is None:
        raise ConfigurationError("Monte Carlo estimate_phi needs reps and a generator")
    if reps < 1:
        raise ConfigurationError(f"reps must be >= 1, got {reps}")
    zeros = np.zeros(jmax, dtype=np.int64)
    done = 0
    chunk = max(1, int(4_000_000 // jmax))
    while done < reps:
        c = min(chunk, reps - done)
        s = np.cumsum(spec.sample(gen, (c, jmax)), axis=1)
        zeros += np.count_nonzero(s == 0, axis=0)
        done += c
    j = np.arange(1, jmax + 1, dtype=np.float64)
    return PhiEstimate(float(np.sum(zeros / (reps * j))), False, jmax)
