"""Sequential tree growth under a weight environment.

Vertices arrive one at a time; vertex k picks its parent among 0..k-1 with
probability proportional to the environment weights, then the connecting edge
gets an independent length.  The parent-selection kernel lives in
:mod:`rrt_lab.kernels` (numba Fenwick sampler or pure-numpy fallback chosen at
import time); this module wraps it with edge lengths, per-vertex statistics
and fast marginal samplers that skip building the tree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .env import Environment
from .errors import ConfigurationError, DomainError

__all__ = [
    "EdgeLenSpec", "RecursiveTree", "TreeStats", "grow", "tree_stats",
    "depth_sample_fast", "outdeg_sample_fast", "save_tree_csv",
]


@dataclass(frozen=True)
class EdgeLenSpec:
    """Distribution of one edge length Y >= 0, independent of the weights."""

    kind: str
    value: float = 1.0
    sampler: Callable[[np.random.Generator, int], np.ndarray] | None = None
    _mean: float | None = None

    @classmethod
    def unit(cls) -> "EdgeLenSpec":
        return cls("unit", 1.0)

    @classmethod
    def deterministic(cls, c: float) -> "EdgeLenSpec":
        if not (c >= 0 and math.isfinite(c)):
            raise ConfigurationError(f"deterministic edge length must be >= 0, got {c}")
        return cls("deterministic", float(c))

    @classmethod
    def exponential(cls, mean: float) -> "EdgeLenSpec":
        if not (mean > 0 and math.isfinite(mean)):
            raise ConfigurationError(f"exponential edge mean must be positive, got {mean}")
        return cls("exponential", float(mean))

    @classmethod
    def custom(cls, sampler: Callable[[np.random.Generator, int], np.ndarray],
               mean: float | None = None) -> "EdgeLenSpec":
        if not callable(sampler):
            raise ConfigurationError("custom edge lengths need a callable sampler")
        return cls("custom", sampler=sampler, _mean=mean)

    @property
    def mean(self) -> float:
        if self.kind in ("unit", "deterministic", "exponential"):
            return self.value
        if self._mean is None:
            raise ConfigurationError("custom edge spec was built without a mean")
        return self._mean

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        if self.kind in ("unit", "deterministic"):
            return np.full(size, self.value)
        if self.kind == "exponential":
            return self.value * gen.standard_exponential(size)
        if self.kind == "custom":
            y = np.asarray(self.sampler(gen, size), dtype=np.float64)
            if y.shape != (size,):
                raise DomainError(f"custom sampler returned shape {y.shape}, wanted ({size},)")
            if np.any(y < 0):
                raise DomainError("edge lengths must be nonnegative")
            return y
        raise ConfigurationError(f"unknown edge length spec {self.kind!r}")

    def char_fn(self, t: float) -> complex:
        """E exp(i t Y) for the built-in kinds."""
        if self.kind in ("unit", "deterministic"):
            return complex(math.cos(t * self.value), math.sin(t * self.value))
        if self.kind == "exponential":
            return 1.0 / (1.0 - 1j * t * self.value)
        raise ConfigurationError(f"no closed-form characteristic function for {self.kind!r}")


@dataclass
class RecursiveTree:
    """parent[k] of each vertex (parent[0] = -1) and the incoming edge length."""

    parent: np.ndarray
    edge_len: np.ndarray
    rebuilds: int = 0

    @property
    def n(self) -> int:
        return self.parent.shape[0] - 1


class TreeStats(NamedTuple):
    depths: np.ndarray      # weighted root distance of each vertex
    outdegrees: np.ndarray  # number of children of each vertex


def grow(env: Environment, n: int, lens: EdgeLenSpec,
         gen: np.random.Generator) -> RecursiveTree:
    """Grow the n-step tree.  Draw order is fixed: parent uniforms, then lengths."""
    if not (0 <= n <= env.n):
        raise DomainError(f"grow needs 0 <= n <= env.n, got n={n}, env.n={env.n}")
    u = gen.random(n)
    y = lens.sample(gen, n)
    parents, rebuilds = kernels.grow_parents(env.logw[:n], u)
    parent = np.empty(n + 1, dtype=np.int64)
    parent[0] = -1
    parent[1:] = parents
    edge_len = np.zeros(n + 1)
    edge_len[1:] = y
    return RecursiveTree(parent=parent, edge_len=edge_len, rebuilds=int(rebuilds))


def tree_stats(tree: RecursiveTree) -> TreeStats:
    depths = kernels.depths_from_parents(tree.parent, tree.edge_len)
    outdeg = np.bincount(tree.parent[1:], minlength=tree.n + 1).astype(np.int64)
    return TreeStats(depths=depths, outdegrees=outdeg)


def depth_sample_fast(env: Environment, n: int, lens: EdgeLenSpec,
                      gen: np.random.Generator) -> float:
    """One draw of the depth of vertex n without growing the tree.

    Uses the fact that the depth equals Y(n) plus a sum of Y(j) over
    independent indicators with success probability p_j(j).
    """
    if not (0 <= n <= env.n):
        raise DomainError(f"depth_sample_fast needs 0 <= n <= env.n, got n={n}")
    if n == 0:
        return 0.0
    u = gen.random(n - 1)
    y = lens.sample(gen, n)
    if n == 1:
        return float(y[0])
    p = np.exp(env.logw[1:n] - env.log_prefix_mass[1:n])
    return float(np.dot(u < p, y[:n - 1]) + y[n - 1])


def outdeg_sample_fast(env: Environment, n: int, j: int,
                       gen: np.random.Generator) -> int:
    """One draw of the outdegree of v(j) in the n-step tree, tree-free.

    Vertex k+1 attaches to v(j) with probability w(j)/W_k, independently
    across k = j..n-1.
    """
    if not (0 <= j <= n <= env.n):
        raise DomainError(f"outdeg_sample_fast needs 0 <= j <= n <= env.n")
    if j == n:
        return 0
    p = np.exp(env.logw[j] - env.log_prefix_mass[j:n])
    return int(np.count_nonzero(gen.random(n - j) < p))


def save_tree_csv(tree: RecursiveTree, path) -> None:
    """Dump (k, parent, edge_len, depth) with floats at 17 significant digits."""
    import csv

    depths = kernels.depths_from_parents(tree.parent, tree.edge_len)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "parent", "edge_len", "depth"])
        for k in range(tree.n + 1):
            writer.writerow([k, int(tree.parent[k]),
                             format(tree.edge_len[k], ".17g"),
                             format(depths[k], ".17g")])
