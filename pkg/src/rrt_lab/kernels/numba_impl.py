"""Numba-compiled hot kernels.

Same contracts as :mod:`rrt_lab.kernels.numpy_impl`; see there for the
semantics.  All kernels are nopython + nogil so replicate-level thread pools
get real parallelism, and cached so the compile cost is paid once per machine.
"""
from __future__ import annotations

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True, nogil=True)
def logaddexp_accumulate(x):
    n = x.shape[0]
    out = np.empty(n)
    if n == 0:
        return out
    acc = x[0]
    out[0] = acc
    for i in range(1, n):
        a = acc
        b = x[i]
        if b > a:
            a, b = b, a
        d = b - a
        # d is nan only when both operands are -inf; keep -inf then.
        if d > -745.0:
            acc = a + np.log1p(np.exp(d))
        else:
            acc = a
        out[i] = acc
    return out


@njit(cache=True, nogil=True)
def _fenwick_build(tree, vals, count, cap):
    for i in range(cap + 1):
        tree[i] = 0.0
    total = 0.0
    # Propagation must run over every node up to cap, not just the filled
    # prefix: an ancestor above `count` can receive mass only through an
    # intermediate node that is itself above `count`.
    for i in range(1, cap + 1):
        if i <= count:
            tree[i] += vals[i - 1]
            total += vals[i - 1]
        j = i + (i & (-i))
        if j <= cap:
            tree[j] += tree[i]
    return total


@njit(cache=True, nogil=True)
def grow_parents(logw, u, band=300.0):
    n = u.shape[0]
    parents = np.empty(n, dtype=np.int64)
    if n == 0:
        return parents, 0
    cap = n                      # slots for vertices 0..n-1, 1-based internally
    tree = np.zeros(cap + 1, dtype=np.float64)
    vals = np.empty(cap, dtype=np.float64)

    offset = logw[0]
    rebuilds = 0
    vals[0] = np.exp(logw[0] - offset)
    total = vals[0]
    i = 1
    while i <= cap:
        tree[i] += vals[0]
        i += i & (-i)

    # highest power of two <= cap, for the prefix-inversion descent
    topbit = 1
    while (topbit << 1) <= cap:
        topbit <<= 1

    for k in range(1, n + 1):
        # parent of vertex k: smallest idx with prefix mass > target
        target = u[k - 1] * total
        idx = 0
        rem = target
        bit = topbit
        while bit > 0:
            nxt = idx + bit
            if nxt <= cap and tree[nxt] <= rem:
                idx = nxt
                rem -= tree[nxt]
            bit >>= 1
        if idx > k - 1:
            idx = k - 1          # guard fp roundup of u*total
        parents[k - 1] = idx

        if k < n:
            lw = logw[k]
            if lw - offset > band:
                rebuilds += 1
                offset = lw
                for j in range(k):
                    vals[j] = np.exp(logw[j] - offset)
                total = _fenwick_build(tree, vals, k, cap)
            v = np.exp(lw - offset)
            vals[k] = v
            total += v
            i = k + 1
            while i <= cap:
                tree[i] += v
                i += i & (-i)
    return parents, rebuilds


@njit(cache=True, nogil=True)
def poisson_binomial_pmf(probs):
    m = probs.shape[0]
    pmf = np.zeros(m + 1)
    pmf[0] = 1.0
    for i in range(m):
        q = probs[i]
        r = 1.0 - q
        pmf[i + 1] = pmf[i] * q
        for k in range(i, 0, -1):
            pmf[k] = pmf[k] * r + pmf[k - 1] * q
        pmf[0] *= r
    return pmf


@njit(cache=True, nogil=True)
def depths_from_parents(parent, edge_len):
    n1 = parent.shape[0]
    d = np.zeros(n1)
    for k in range(1, n1):
        d[k] = d[parent[k]] + edge_len[k]
    return d
