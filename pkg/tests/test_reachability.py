import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from orperc import (Direction, EdgeConfig, EdgeRef, ExplicitConfig, Frontier,
                    InsufficientWindowError, OutOfWindowError, Side, Window, anti_cluster,
                    cluster, cone, evolve_frontier, perc_points, percolates_to,
                    symmetric_difference)
from orperc.experiments import sample_seed
from orperc.reachability import PercSet


def cols(frontiers):
    return [f.columns for f in frontiers]


def test_frontier_examples(six_edge):
    assert cols(evolve_frontier(Frontier(0, (0,)), 2, EdgeConfig(0, 1.0))) == [(0,), (-1, 1), (-2, 0, 2)]
    assert cols(evolve_frontier(Frontier(0, (0,)), 2, EdgeConfig(0, 0.0), pruned=True)) == [(0,), (1,), (2,)]
    assert cols(evolve_frontier(Frontier(0, (0,)), 2, six_edge)) == [(0,), (-1, 1), (0,)]
    assert cols(evolve_frontier(Frontier(0, (0,)), 2, EdgeConfig(0, 0.0)))[-1] == ()


def test_frontier_validation():
    with pytest.raises(ValueError):
        Frontier(0, (1,))
    with pytest.raises(ValueError):
        evolve_frontier(Frontier(0, ()), 1, EdgeConfig(0, 1.0))
    with pytest.raises(OutOfWindowError):
        evolve_frontier(Frontier(0, (0,)), 3, EdgeConfig(0, 1.0), window=Window(-3, 3, 0, 2))


def test_cluster_examples(six_edge):
    w = Window(-2, 2, 0, 2)
    assert cluster((0, 0), EdgeConfig(0, 0.0), w) == {(0, 0)}
    assert cluster((0, 0), EdgeConfig(0, 1.0), w) == cone((0, 0), Direction.FORWARD, 2)
    assert cluster((0, 0), six_edge) == {(0, 0), (-1, 1), (1, 1), (0, 2)}
    with pytest.raises(ValueError):
        cluster((0, 0), EdgeConfig(0, 0.5))


def test_anti_cluster_examples():
    assert anti_cluster((0, 0), EdgeConfig(0, 0.0), 3) == {(0, 0)}
    assert anti_cluster((0, 2), EdgeConfig(0, 1.0), 2) == cone((0, 2), Direction.BACKWARD, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.3, 0.9))
def test_anti_cluster_is_mirrored_cluster(seed, p):
    # reversing time turns anti-oriented paths into oriented ones
    depth = 6
    u = (0, 0)
    g = EdgeConfig(seed, p).snapshot(Window(-depth, depth, -depth, 0))
    r = g.reversed_time()
    flipped = {(x, -t) for x, t in cluster(u, r)}
    assert anti_cluster(u, g, depth) == flipped


def test_percolates_examples():
    assert percolates_to((0, 0), 7, EdgeConfig(1, 1.0))
    assert not percolates_to((0, 0), 1, EdgeConfig(1, 0.0))
    with pytest.raises(InsufficientWindowError):
        percolates_to((0, 0), 3, ExplicitConfig.closed(Window(-2, 2, 0, 2)))


def test_exact_probability_by_enumeration():
    # the cone window has 8 edges; the two corner ones cannot matter
    w = Window(-2, 2, 0, 2)
    assert len(list(w.edges())) == 8
    brute = sum(bool(oracle.paths_up((0, 0), 2, oracle.open_set(w, b))) for b in range(256))
    fast = sum(percolates_to((0, 0), 2, ExplicitConfig.from_bits(w, b)) for b in range(256))
    assert brute == fast == 39 * 4


def test_perc_points_examples():
    w = Window(-3, 3, 0, 3)
    full = perc_points(w, 5, EdgeConfig(0, 1.0))
    assert full.members == frozenset(w.vertices())
    assert perc_points(w, 5, EdgeConfig(0, 1.0), bidirectional=True).members == full.members
    assert full.to_text().splitlines()[:3] == ["N=5 bidirectional=0", "-2,0", "0,0"]
    with pytest.raises(ValueError):
        perc_points(w, 0, EdgeConfig(0, 1.0))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.45, 0.8), st.integers(1, 12))
def test_perc_points_nested_in_N(seed, p, n):
    w = Window(-4, 4, 0, 3)
    cfg = EdgeConfig(seed, p)
    assert perc_points(w, n + 1, cfg).members <= perc_points(w, n, cfg).members
    assert perc_points(w, n, cfg, bidirectional=True).members <= perc_points(w, n, cfg).members
    for v in perc_points(w, n, cfg).members:
        assert percolates_to(v, n, cfg)


def test_bidirectional_density_is_theta_squared():
    w = Window(-10, 10, 0, 10)
    size = len(list(w.vertices()))
    one, two = [], []
    for i in range(200):
        cfg = EdgeConfig(sample_seed(1, "square", i), 0.8)
        one.append(len(perc_points(w, 200, cfg)) / size)
        two.append(len(perc_points(w, 200, cfg, bidirectional=True)) / size)
    one, two = np.array(one), np.array(two)
    se = np.hypot(2 * one.mean() * one.std(ddof=1), two.std(ddof=1)) / np.sqrt(200)
    assert abs(two.mean() - one.mean() ** 2) < 3 * se


def test_symmetric_difference_examples():
    w = Window(-8, 10, 0, 6)
    assert symmetric_difference((0, 0), (0, 0), EdgeConfig(3, 0.6), w) == set()
    assert symmetric_difference((0, 0), (2, 0), EdgeConfig(3, 0.0), w) == {(0, 0), (2, 0)}
    d = symmetric_difference((0, 0), (2, 0), EdgeConfig(3, 1.0), w)
    for t in range(1, 7):
        assert {v for v in d if v[1] == t} == {(-t, t), (2 + t, t)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.2, 0.9), st.data())
def test_opening_an_edge_never_shrinks_a_cluster(seed, p, data):
    w = Window(-5, 5, 0, 5)
    g = EdgeConfig(seed, p).snapshot(w)
    e = data.draw(st.sampled_from(list(w.edges())))
    more = g.with_edge(e, True)
    for u in [(0, 0), (-2, 0), (3, 1)]:
        assert cluster(u, g) <= cluster(u, more)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.floats(0, 1), st.floats(0, 1))
def test_cluster_coupled_in_p(seed, p1, p2):
    lo, hi = sorted((p1, p2))
    w = Window(-8, 8, 0, 8)
    c_lo = cluster((0, 0), EdgeConfig(seed, lo), w)
    assert c_lo <= cluster((0, 0), EdgeConfig(seed, hi), w)
    assert c_lo <= cone((0, 0), Direction.FORWARD, 8)


def test_percset_container():
    s = PercSet(Window(0, 2, 0, 0), 3, frozenset({(0, 0)}))
    assert (0, 0) in s and len(s) == 1
