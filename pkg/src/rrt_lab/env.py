"""Weight environments in log-space.

An environment is the weight sequence w(0)=1, w(1), ..., w(n) that biases
attachment.  Everything is stored as logw together with the prefix masses
log W_r = log(w(0) + ... + w(r)), computed by a streaming log-sum-exp so that
product-form weights spanning e^{+-Theta(sqrt n)} never overflow.

The attachment probability for step r+1 is p_r(j) = w(j) / W_r.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError
from .walk import WalkPath

__all__ = [
    "WeightDist", "EnvModel", "Environment", "build_environment",
    "attach_prob", "self_prob_seq", "zeta", "iid_weight_sanity",
    "save_environment_csv", "load_environment_csv",
]


@dataclass(frozen=True)
class WeightDist:
    """Distribution of one i.i.d. weight (must be strictly positive)."""

    kind: str
    a: float = 0.0
    b: float = 0.0

    @classmethod
    def uniform(cls, low: float, high: float) -> "WeightDist":
        if not (0.0 <= low < high) or not math.isfinite(high):
            raise ConfigurationError(f"uniform weights need 0 <= low < high, got {low}, {high}")
        return cls("uniform", float(low), float(high))

    @classmethod
    def exponential(cls, mean: float) -> "WeightDist":
        if not (mean > 0 and math.isfinite(mean)):
            raise ConfigurationError(f"exponential weight mean must be positive, got {mean}")
        return cls("exponential", float(mean))

    @classmethod
    def constant(cls, c: float) -> "WeightDist":
        if not (c > 0 and math.isfinite(c)):
            raise ConfigurationError(f"constant weight must be positive, got {c}")
        return cls("constant", float(c))

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform":
            return self.a + (self.b - self.a) * gen.random(size)
        if self.kind == "exponential":
            return self.a * gen.standard_exponential(size)
        if self.kind == "constant":
            return np.full(size, self.a)
        raise ConfigurationError(f"unknown weight distribution {self.kind!r}")

    @property
    def mean(self) -> float:
        if self.kind == "uniform":
            return 0.5 * (self.a + self.b)
        return self.a


@dataclass(frozen=True)
class EnvModel:
    """Recipe for building an Environment."""

    kind: str
    alpha: float = 0.0
    path: WalkPath | None = None
    weight_dist: WeightDist | None = None

    @classmethod
    def constant(cls) -> "EnvModel":
        return cls("constant")

    @classmethod
    def power(cls, alpha: float) -> "EnvModel":
        """w(j) = j^alpha for j >= 1 (slowly varying factor fixed to 1)."""
        if not math.isfinite(alpha):
            raise ConfigurationError(f"power alpha must be finite, got {alpha}")
        return cls("power", alpha=float(alpha))

    @classmethod
    def stretched_exp(cls, alpha: float) -> "EnvModel":
        """w(j) = alpha j^(alpha-1) exp(j^alpha), alpha in (0, 1]."""
        if not (0.0 < alpha <= 1.0):
            raise ConfigurationError(f"stretched_exp alpha must lie in (0, 1], got {alpha}")
        return cls("stretched_exp", alpha=float(alpha))

    @classmethod
    def product_form(cls, path: WalkPath) -> "EnvModel":
        """w(j) = exp(-S_j) along the given walk path."""
        if not isinstance(path, WalkPath):
            raise ConfigurationError("product_form needs a WalkPath")
        return cls("product_form", path=path)

    @classmethod
    def iid_weights(cls, weight_dist: WeightDist) -> "EnvModel":
        if not isinstance(weight_dist, WeightDist):
            raise ConfigurationError("iid_weights needs a WeightDist")
        return cls("iid_weights", weight_dist=weight_dist)


@dataclass
class Environment:
    """Built environment: logw[j] and log_prefix_mass[r] for 0 <= j, r <= n."""

    logw: np.ndarray
    log_prefix_mass: np.ndarray
    n: int
    model_kind: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.logw = np.asarray(self.logw, dtype=np.float64)
        self.log_prefix_mass = np.asarray(self.log_prefix_mass, dtype=np.float64)
        if self.logw.shape != (self.n + 1,) or self.log_prefix_mass.shape != (self.n + 1,):
            raise DomainError("environment arrays must have length n + 1")
        if self.logw[0] != 0.0:
            raise DomainError("w(0) = 1 always, so logw[0] must be 0")

    @classmethod
    def from_logw(cls, logw, model_kind: str = "custom") -> "Environment":
        logw = np.asarray(logw, dtype=np.float64)
        lpm = kernels.logaddexp_accumulate(logw)
        return cls(logw=logw, log_prefix_mass=lpm, n=logw.shape[0] - 1,
                   model_kind=model_kind)


def build_environment(model: EnvModel, n: int,
                      gen: np.random.Generator | None = None) -> Environment:
    """Materialize weights for vertices 0..n.  iid_weights requires a generator."""
    if n < 0:
        raise DomainError(f"environment size n must be >= 0, got {n}")
    logw = np.zeros(n + 1)
    if model.kind == "constant":
        pass
    elif model.kind == "power":
        j = np.arange(1, n + 1, dtype=np.float64)
        logw[1:] = model.alpha * np.log(j)
    elif model.kind == "stretched_exp":
        a = model.alpha
        j = np.arange(1, n + 1, dtype=np.float64)
        logw[1:] = math.log(a) + (a - 1.0) * np.log(j) + j ** a
    elif model.kind == "product_form":
        if model.path.n < n:
            raise DomainError(f"product-form path covers n={model.path.n} < requested {n}")
        logw[:] = -model.path.s[:n + 1]
    elif model.kind == "iid_weights":
        if gen is None:
            raise ConfigurationError("iid_weights environments need a generator")
        if n:
            w = model.weight_dist.sample(gen, n)
            if np.any(w <= 0) or not np.all(np.isfinite(w)):
                raise ConfigurationError("sampled weights must be strictly positive and finite")
            logw[1:] = np.log(w)
    else:
        raise ConfigurationError(f"unknown environment model {model.kind!r}")
    return Environment.from_logw(logw, model_kind=model.kind)


def attach_prob(env: Environment, r: int, j: int) -> float:
    """p_r(j) = w(j) / W_r, the chance step r+1 attaches to v(j)."""
    if not (0 <= j <= r <= env.n):
        raise DomainError(f"attach_prob needs 0 <= j <= r <= n, got j={j}, r={r}, n={env.n}")
    return math.exp(env.logw[j] - env.log_prefix_mass[r])


def self_prob_seq(env: Environment, n: int) -> np.ndarray:
    """p_j(j) for j = 1..n: the chance vertex j+1 attaches to the newest vertex."""
    if not (0 <= n <= env.n):
        raise DomainError(f"self_prob_seq needs 0 <= n <= env.n, got n={n}, env.n={env.n}")
    return np.exp(env.logw[1:n + 1] - env.log_prefix_mass[1:n + 1])


def zeta(env: Environment, n: int, h_n: float, edge_means=1.0) -> float:
    """(1/h_n) * sum_{j=1}^n p_j(j) E Y(j); scalar edge_means = i.i.d. shorthand."""
    if not (h_n > 0 and math.isfinite(h_n)):
        raise DomainError(f"normalizer h_n must be positive and finite, got {h_n}")
    p = self_prob_seq(env, n)
    em = np.asarray(edge_means, dtype=np.float64)
    if em.ndim == 0:
        return float(p.sum() * em / h_n)
    if em.shape != (n,):
        raise DomainError(f"edge_means must be scalar or length n={n}, got shape {em.shape}")
    return float(np.dot(p, em) / h_n)


def iid_weight_sanity(model: EnvModel, n: int, gen: np.random.Generator) -> float:
    """Sample mean of n i.i.d. weights (strong-law sanity handle)."""
    if model.kind != "iid_weights":
        raise DomainError("iid_weight_sanity applies to iid_weights models only")
    if n < 1:
        raise DomainError(f"need n >= 1 weights, got {n}")
    w = model.weight_dist.sample(gen, n)
    return float(np.mean(w))


def save_environment_csv(env: Environment, path) -> None:
    """Columnar dump (j, logw, log_prefix_mass); floats at 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "logw", "log_prefix_mass"])
        for j in range(env.n + 1):
            writer.writerow([j, format(env.logw[j], ".17g"),
                             format(env.log_prefix_mass[j], ".17g")])


def load_environment_csv(path) -> Environment:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["j", "logw", "log_prefix_mass"]:
            raise DomainError(f"unexpected environment CSV header: {header}")
        logw, lpm = [], []
        for row in reader:
            logw.append(float(row[1]))
            lpm.append(float(row[2]))
    logw = np.asarray(logw)
    lpm = np.asarray(lpm)
    return Environment(logw=logw, log_prefix_mass=lpm, n=logw.shape[0] - 1,
                       model_kind="loaded")
