"""Tree growth: edge-length specs, draw-order contract, per-vertex statistics.

The growth routine is pinned down two ways: small crafted trees whose depths
and outdegrees are known by hand, and exact replay of the documented draw
order (parent uniforms first, then edge lengths) against the raw kernel.  The
tree-free marginal samplers are checked against the same closed-form
attachment probabilities the full grower uses, and against a Monte Carlo
histogram of grown trees.
"""
import csv
import math

import numpy as np
import pytest

from rrt_lab import kernels
from rrt_lab.env import EnvModel, build_environment
from rrt_lab.errors import ConfigurationError, DomainError
from rrt_lab.rng import stream
from rrt_lab.treegrow import (EdgeLenSpec, RecursiveTree, depth_sample_fast,
                              grow, outdeg_sample_fast, save_tree_csv,
                              tree_stats)


# ---------------------------------------------------------------------------
# EdgeLenSpec
# ---------------------------------------------------------------------------

def test_edge_spec_validation():
    with pytest.raises(ConfigurationError):
        EdgeLenSpec.deterministic(-1.0)
    with pytest.raises(ConfigurationError):
        EdgeLenSpec.deterministic(math.inf)
    with pytest.raises(ConfigurationError):
        EdgeLenSpec.exponential(0.0)
    with pytest.raises(ConfigurationError):
        EdgeLenSpec.exponential(-2.0)
    with pytest.raises(ConfigurationError):
        EdgeLenSpec.custom("not callable")  # type: ignore[arg-type]


def test_edge_spec_means():
    assert EdgeLenSpec.unit().mean == 1.0
    assert EdgeLenSpec.deterministic(2.5).mean == 2.5
    assert EdgeLenSpec.exponential(0.7).mean == 0.7
    assert EdgeLenSpec.custom(lambda g, s: g.random(s), mean=3.0).mean == 3.0
    with pytest.raises(ConfigurationError):
        _ = EdgeLenSpec.custom(lambda g, s: g.random(s)).mean


def test_edge_spec_sampling():
    g = stream(11, 0)
    assert np.all(EdgeLenSpec.unit().sample(g, 5) == 1.0)
    assert np.all(EdgeLenSpec.deterministic(0.25).sample(g, 5) == 0.25)
    e = EdgeLenSpec.exponential(2.0).sample(g, 20_000)
    assert e.min() > 0.0
    assert abs(e.mean() - 2.0) < 5 * 2.0 / math.sqrt(20_000)


def test_edge_spec_custom_sampler_contract():
    good = EdgeLenSpec.custom(lambda g, s: np.full(s, 0.5), mean=0.5)
    assert np.all(good.sample(stream(11, 1), 4) == 0.5)
    bad_shape = EdgeLenSpec.custom(lambda g, s: np.zeros((2, s)))
    with pytest.raises(DomainError):
        bad_shape.sample(stream(11, 1), 4)
    negative = EdgeLenSpec.custom(lambda g, s: np.full(s, -1.0))
    with pytest.raises(DomainError):
        negative.sample(stream(11, 1), 4)


def test_edge_spec_char_fn():
    for t in (0.0, 0.3, -1.7):
        assert EdgeLenSpec.unit().char_fn(t) == pytest.approx(np.exp(1j * t))
        assert EdgeLenSpec.deterministic(2.0).char_fn(t) == pytest.approx(
            np.exp(2j * t))
        assert EdgeLenSpec.exponential(1.5).char_fn(t) == pytest.approx(
            1.0 / (1.0 - 1.5j * t))
    # any characteristic function is 1 at the origin and bounded by 1
    assert EdgeLenSpec.exponential(3.0).char_fn(0.0) == 1.0
    assert abs(EdgeLenSpec.exponential(3.0).char_fn(2.0)) <= 1.0
    with pytest.raises(ConfigurationError):
        EdgeLenSpec.custom(lambda g, s: g.random(s), mean=0.5).char_fn(1.0)


# ---------------------------------------------------------------------------
# grow: validation and draw-order contract
# ---------------------------------------------------------------------------

def test_grow_validation():
    env = build_environment(EnvModel.constant(), 10)
    with pytest.raises(DomainError):
        grow(env, 11, EdgeLenSpec.unit(), stream(12, 0))
    with pytest.raises(DomainError):
        grow(env, -1, EdgeLenSpec.unit(), stream(12, 0))


def test_grow_zero_steps():
    env = build_environment(EnvModel.constant(), 10)
    tree = grow(env, 0, EdgeLenSpec.unit(), stream(12, 0))
    assert tree.n == 0
    assert tree.parent.tolist() == [-1]
    assert tree.edge_len.tolist() == [0.0]
    st = tree_stats(tree)
    assert st.depths.tolist() == [0.0]
    assert st.outdegrees.tolist() == [0]


def test_grow_draw_order_replay():
    # the documented order is: n parent uniforms, then n edge lengths; replaying
    # the same stream by hand must reproduce the tree draw for draw
    env = build_environment(EnvModel.power(1.0), 64)
    n = 50
    tree = grow(env, n, EdgeLenSpec.exponential(2.0), stream(13, 4))
    g = stream(13, 4)
    u = g.random(n)
    y = 2.0 * g.standard_exponential(n)
    parents, rebuilds = kernels.grow_parents(env.logw[:n], u)
    assert tree.parent[0] == -1
    assert np.array_equal(tree.parent[1:], parents)
    assert tree.edge_len[0] == 0.0
    assert np.array_equal(tree.edge_len[1:], y)
    assert tree.rebuilds == rebuilds


def test_grow_parents_independent_of_edge_spec():
    # parents are drawn before lengths, so two runs from the same stream with
    # different edge laws attach identically
    env = build_environment(EnvModel.constant(), 40)
    t1 = grow(env, 40, EdgeLenSpec.unit(), stream(13, 5))
    t2 = grow(env, 40, EdgeLenSpec.exponential(3.0), stream(13, 5))
    assert np.array_equal(t1.parent, t2.parent)
    assert not np.array_equal(t1.edge_len, t2.edge_len)


def test_grow_parent_indices_valid():
    env = build_environment(EnvModel.stretched_exp(0.5), 200)
    tree = grow(env, 200, EdgeLenSpec.unit(), stream(13, 6))
    k = np.arange(1, 201)
    assert np.all(tree.parent[1:] >= 0)
    assert np.all(tree.parent[1:] < k)


# ---------------------------------------------------------------------------
# tree_stats
# ---------------------------------------------------------------------------

def test_tree_stats_hand_tree():
    # 0 -> 1 (len 1), 0 -> 2 (len 2), 1 -> 3 (len 3)
    tree = RecursiveTree(parent=np.array([-1, 0, 0, 1]),
                         edge_len=np.array([0.0, 1.0, 2.0, 3.0]))
    st = tree_stats(tree)
    assert st.depths.tolist() == [0.0, 1.0, 2.0, 4.0]
    assert st.outdegrees.tolist() == [2, 1, 0, 0]


def test_tree_stats_consistency():
    env = build_environment(EnvModel.power(2.0), 300)
    tree = grow(env, 300, EdgeLenSpec.exponential(1.0), stream(14, 0))
    st = tree_stats(tree)
    # every non-root vertex sits one edge below its parent
    for k in range(1, tree.n + 1):
        assert st.depths[k] == pytest.approx(
            st.depths[tree.parent[k]] + tree.edge_len[k])
    assert st.depths[0] == 0.0
    # each of the n arrivals contributes exactly one child somewhere
    assert st.outdegrees.sum() == tree.n
    # leaves of the recursive order: the last vertex is always one
    assert st.outdegrees[tree.n] == 0


# ---------------------------------------------------------------------------
# tree-free marginal samplers
# ---------------------------------------------------------------------------

def test_depth_sample_fast_validation_and_edges():
    env = build_environment(EnvModel.constant(), 10)
    with pytest.raises(DomainError):
        depth_sample_fast(env, 11, EdgeLenSpec.unit(), stream(15, 0))
    assert depth_sample_fast(env, 0, EdgeLenSpec.unit(), stream(15, 0)) == 0.0
    assert depth_sample_fast(env, 1, EdgeLenSpec.unit(), stream(15, 0)) == 1.0


def test_depth_sample_fast_replay():
    # replaying the stream through the documented formula reproduces the draw:
    # depth = sum of edge lengths over indicators u_j < w(j)/W_j, plus the
    # last edge
    env = build_environment(EnvModel.power(1.5), 40)
    n = 30
    got = depth_sample_fast(env, n, EdgeLenSpec.exponential(0.5), stream(15, 1))
    g = stream(15, 1)
    u = g.random(n - 1)
    y = 0.5 * g.standard_exponential(n)
    p = np.exp(env.logw[1:n] - env.log_prefix_mass[1:n])
    want = float(np.dot(u < p, y[:n - 1]) + y[n - 1])
    assert got == want


def test_depth_pmf_small_constant_tree():
    # with equal weights and unit edges the depth of the third vertex is
    # 1 + Bernoulli(1/2) + Bernoulli(1/3): pmf (1/3, 1/2, 1/6) on {1, 2, 3}
    env = build_environment(EnvModel.constant(), 3)
    reps = 30_000
    g = stream(15, 2)
    draws = np.array([depth_sample_fast(env, 3, EdgeLenSpec.unit(), g)
                      for _ in range(reps)])
    for value, p in [(1.0, 1 / 3), (2.0, 1 / 2), (3.0, 1 / 6)]:
        freq = np.mean(draws == value)
        assert abs(freq - p) < 5 * math.sqrt(p * (1 - p) / reps)


def test_depth_fast_matches_grown_trees():
    # the marginal sampler and the full grower target the same law; compare
    # their histograms at tree size 3
    env = build_environment(EnvModel.constant(), 3)
    reps = 12_000
    g = stream(15, 3)
    grown = np.array([tree_stats(grow(env, 3, EdgeLenSpec.unit(), g)).depths[3]
                      for _ in range(reps)])
    for value, p in [(1.0, 1 / 3), (2.0, 1 / 2), (3.0, 1 / 6)]:
        freq = np.mean(grown == value)
        assert abs(freq - p) < 5 * math.sqrt(p * (1 - p) / reps)


def test_outdeg_sample_fast_validation_and_edges():
    env = build_environment(EnvModel.constant(), 10)
    with pytest.raises(DomainError):
        outdeg_sample_fast(env, 10, 11, stream(16, 0))
    with pytest.raises(DomainError):
        outdeg_sample_fast(env, 11, 0, stream(16, 0))
    with pytest.raises(DomainError):
        outdeg_sample_fast(env, 5, -1, stream(16, 0))
    assert outdeg_sample_fast(env, 7, 7, stream(16, 0)) == 0


def test_outdeg_sample_fast_replay():
    env = build_environment(EnvModel.power(2.0), 60)
    n, j = 50, 12
    got = outdeg_sample_fast(env, n, j, stream(16, 1))
    g = stream(16, 1)
    p = np.exp(env.logw[j] - env.log_prefix_mass[j:n])
    want = int(np.count_nonzero(g.random(n - j) < p))
    assert got == want


def test_outdeg_root_mean_is_harmonic():
    # equal weights: the root gains a child at step k with probability 1/(k+1),
    # so its mean outdegree is the harmonic number H_n
    env = build_environment(EnvModel.constant(), 50)
    n = 50
    p = 1.0 / np.arange(1, n + 1)
    mean, var = p.sum(), (p * (1 - p)).sum()
    reps = 4_000
    g = stream(16, 2)
    draws = np.array([outdeg_sample_fast(env, n, 0, g) for _ in range(reps)])
    assert abs(draws.mean() - mean) < 5 * math.sqrt(var / reps)


def test_outdeg_fast_matches_grown_trees():
    # compare the tree-free draw of the root outdegree with the histogram of
    # actual grown trees at a small size
    env = build_environment(EnvModel.constant(), 4)
    reps = 12_000
    g = stream(16, 3)
    grown = np.array([tree_stats(grow(env, 4, EdgeLenSpec.unit(), g)).outdegrees[0]
                      for _ in range(reps)])
    g = stream(16, 4)
    fast = np.array([outdeg_sample_fast(env, 4, 0, g) for _ in range(reps)])
    for value in range(5):
        pg = np.mean(grown == value)
        pf = np.mean(fast == value)
        band = 5 * math.sqrt(2 * max(pg * (1 - pg), 1e-4) / reps)
        assert abs(pg - pf) < band


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def test_save_tree_csv_roundtrip(tmp_path):
    env = build_environment(EnvModel.constant(), 20)
    tree = grow(env, 20, EdgeLenSpec.exponential(1.0), stream(17, 0))
    depths = tree_stats(tree).depths
    path = tmp_path / "tree.csv"
    save_tree_csv(tree, path)
    raw = path.read_bytes()
    assert b"\r\n" in raw  # RFC 4180 line endings
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "parent", "edge_len", "depth"]
    assert len(rows) == tree.n + 2
    for k, row in enumerate(rows[1:]):
        assert int(row[0]) == k
        assert int(row[1]) == tree.parent[k]
        # 17 significant digits round-trip doubles exactly
        assert float(row[2]) == tree.edge_len[k]
        assert float(row[3]) == depths[k]
