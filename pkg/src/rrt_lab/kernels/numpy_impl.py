"""Pure-numpy implementations of the hot kernels.

These are the fallback path selected by ``RRT_LAB_BACKEND=numpy`` (or
automatically when numba is unavailable).  Each function matches the numba
implementation in semantics; the growth sampler exploits the fact that vertex
weights never change after insertion, so the online binary-indexed-tree
algorithm can be replayed offline with cumulative sums per offset segment.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def logaddexp_accumulate(x: np.ndarray) -> np.ndarray:
    """Running log(sum(exp(x[:k+1]))) along a 1-D array."""
    return np.logaddexp.accumulate(x)


def grow_parents(logw: np.ndarray, u: np.ndarray, band: float = 300.0):
    """Parent choices for vertices 1..n given weights of vertices 0..n-1.

    Vertex k attaches to the smallest index j whose cumulative rescaled weight
    exceeds u[k-1] * (total mass of vertices 0..k-1).  Weights are stored as
    exp(logw - offset); the offset is refreshed (a "rebuild") whenever a new
    logw would exceed it by more than ``band``, so stored values never overflow.
    Values far below the offset underflow to 0, which is harmless: their true
    selection probability is below e^-band relative to the dominant mass.

    Returns (parents, rebuilds) with parents[k-1] = parent of vertex k.
    """
    n = u.shape[0]
    parents = np.empty(n, dtype=np.int64)
    if n == 0:
        return parents, 0

    logw = np.asarray(logw, dtype=np.float64)
    # Segment the insertion sequence by offset.  Offsets strictly increase:
    # a rebuild happens when inserting vertex m with logw[m] - offset > band.
    offsets = [logw[0]]
    triggers = []        # vertex indices whose insertion refreshed the offset
    m = 1
    while m < n:
        above = logw[m:n] > offsets[-1] + band
        hit = int(np.argmax(above))
        if not above[hit]:
            break
        t = m + hit
        triggers.append(t)
        offsets.append(logw[t])
        m = t + 1

    bounds = triggers + [n]
    with np.errstate(under="ignore"):
        lo = 1                      # first parent choice handled by this segment
        for seg, hi in enumerate(bounds):
            # choices k in [lo, hi] use offsets[seg]; candidate prefix 0..hi-1
            cum = np.cumsum(np.exp(logw[:hi] - offsets[seg]))
            ks = np.arange(lo, hi + 1)
            targets = u[ks - 1] * cum[ks - 1]
            chosen = np.searchsorted(cum, targets, side="right")
            # Guard the measure-zero case u*total rounding up to total.
            parents[ks - 1] = np.minimum(chosen, ks - 1)
            lo = hi + 1
    return parents, len(triggers)


def poisson_binomial_pmf(probs: np.ndarray) -> np.ndarray:
    """PMF of a sum of independent Bernoulli(probs[i]) variables, by convolution DP."""
    probs = np.asarray(probs, dtype=np.float64)
    m = probs.shape[0]
    pmf = np.zeros(m + 1)
    pmf[0] = 1.0
    buf = np.empty(m + 1)
    size = 1
    for q in probs:
        r = 1.0 - q
        buf[:size] = pmf[:size] * r
        buf[size] = 0.0
        buf[1:size + 1] += pmf[:size] * q
        size += 1
        pmf[:size] = buf[:size]
    return pmf


def depths_from_parents(parent: np.ndarray, edge_len: np.ndarray) -> np.ndarray:
    """Vertex depths (sum of edge lengths to the root) by pointer doubling."""
    d = np.asarray(edge_len, dtype=np.float64).copy()
    d[0] = 0.0
    anc = np.maximum(np.asarray(parent, dtype=np.int64), 0)
    while anc.any():
        d = d + d[anc]
        anc = anc[anc]
    return d
