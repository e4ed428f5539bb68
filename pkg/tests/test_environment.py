import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orperc import ConfigParseError, EdgeConfig, EdgeRef, ExplicitConfig, Side, Window
from orperc.environment import edge_hash, edge_uniform, materialize
from orperc.errors import InsufficientWindowError

BIG = Window(-500, 500, 0, 1000)


def test_published_hash_vectors():
    assert edge_hash(0, EdgeRef((0, 0), Side.LEFT)) == 0x238275BC38FCBE91
    assert edge_hash(0, EdgeRef((0, 0), Side.RIGHT)) == 0x421DAF3033E887A3
    assert edge_hash(42, EdgeRef((-3, 5), Side.LEFT)) == 0xBB076785A5A69B93
    assert edge_hash(2**64 - 1, EdgeRef((7, -1), Side.RIGHT)) == 0x233EE683F9A54DD5


def test_uniform_deterministic_and_matches_compiled():
    e = EdgeRef((4, 2), Side.RIGHT)
    assert edge_uniform(9, e) == edge_uniform(9, e)
    left, right = EdgeConfig(9, 0.5).uniforms(Window(0, 6, 0, 4))
    assert right[2, 4] == edge_uniform(9, e)
    assert left[2, 4] == edge_uniform(9, EdgeRef((4, 2), Side.LEFT))


def test_uniforms_over_a_million_edges():
    a = np.concatenate([u.ravel() for u in EdgeConfig(1, 0.5).uniforms(BIG)])
    b = np.concatenate([u.ravel() for u in EdgeConfig(2, 0.5).uniforms(BIG)])
    keep = ~np.isnan(a)
    a, b = a[keep], b[keep]
    assert a.size >= 10**6
    assert ((a >= 0) & (a < 1)).all()
    assert abs(a.mean() - 0.5) < 0.002
    assert np.mean(a != b) >= 0.99


@pytest.mark.parametrize("p", [0.25, 0.5, 0.8])
def test_open_fraction(p):
    g = EdgeConfig(3, p).snapshot(BIG)
    valid = np.isfinite(EdgeConfig(3, p).uniforms(BIG)[0])
    n = int(valid.sum()) * 2
    k = int(g.left.sum() + g.right.sum())
    # boundary edges are dropped from the snapshot; they are a tiny minority
    assert abs(k / n - p) < 4 * np.sqrt(p * (1 - p) / n) + 2 * BIG.nt / n


def test_endpoints_and_coupling():
    w = Window(-300, 300, 0, 300)
    g1 = EdgeConfig(5, 1.0).snapshot(w)
    g0 = EdgeConfig(5, 0.0).snapshot(w)
    assert not g0.left.any() and not g0.right.any()
    ref = ExplicitConfig(w, np.ones((w.nt, w.nx)), np.ones((w.nt, w.nx)))
    assert g1 == ref
    lo, hi = EdgeConfig(5, 0.3).snapshot(w), EdgeConfig(5, 0.7).snapshot(w)
    assert not (lo.left & ~hi.left).any() and not (lo.right & ~hi.right).any()


def test_two_level_window_all_open_at_p1():
    g = EdgeConfig(0, 1.0).snapshot(Window(-1, 1, 0, 1))
    assert [e for e in g.window.edges() if not g.is_open(e)] == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**64 - 1), st.floats(0, 1), st.integers(-5, 5), st.integers(0, 5))
def test_window_extensibility(seed, p, dx, dt):
    cfg = EdgeConfig(seed, p)
    sub = Window(-4 + dx, 4 + dx, dt, dt + 5)
    sup = Window(-12, 12, -2, 14)
    assert cfg.snapshot(sup).restrict(sub) == cfg.snapshot(sub)


def test_round_trip_and_metadata():
    g = EdgeConfig(17, 0.6).snapshot(Window(-3, 3, 0, 3))
    back = ExplicitConfig.load(g.to_text())
    assert back == g and back.p == 0.6 and back.seed == 17
    h = ExplicitConfig.from_bits(Window(-1, 1, 0, 1), 0b10)
    assert h.to_text() == "window -1 1 0 1; -; -\n0,0,L,0\n0,0,R,1\n"


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("windo -1 1 0 1; -; -\n", 1),
    ("window -1 1 0 1; -; -\n1,0,L,0\n0,0,R,1\n", 2),
    ("window -1 1 0 1; -; -\n0,0,L,2\n0,0,R,1\n", 2),
    ("window -1 1 0 1; -; -\n0,0,R,1\n0,0,L,0\n", 2),
    ("window -1 1 0 1; -; -\n0,0,L,0\n", 3),
])
def test_load_errors(text, line):
    with pytest.raises(ConfigParseError) as exc:
        ExplicitConfig.load(text)
    assert exc.value.lineno == line


def test_explicit_edges_and_sanitizing():
    w = Window(-1, 1, 0, 1)
    g = ExplicitConfig(w, np.ones((2, 3)), np.ones((2, 3)))
    assert g.open_edges() == [EdgeRef((0, 0), Side.LEFT), EdgeRef((0, 0), Side.RIGHT)]
    assert g.n_edges() == 2
    with pytest.raises(InsufficientWindowError):
        g.is_open(EdgeRef((-1, 1), Side.LEFT))
    assert not g.with_edge(EdgeRef((0, 0), Side.LEFT), False).is_open(((0, 0), "L"))
    with pytest.raises(InsufficientWindowError):
        materialize(g, Window(-2, 2, 0, 1))


def test_mirror_and_time_reversal():
    g = EdgeConfig(4, 0.5).snapshot(Window(-3, 5, -2, 4))
    m = g.mirrored()
    for e in g.window.edges():
        img = EdgeRef((-e.source.x, e.source.t), Side.RIGHT if e.side is Side.LEFT else Side.LEFT)
        assert m.is_open(img) == g.is_open(e)
    r = g.reversed_time()
    for e in g.window.edges():
        tgt = e.target
        img = EdgeRef((tgt.x, -tgt.t), Side.RIGHT if e.side is Side.LEFT else Side.LEFT)
        assert r.is_open(img) == g.is_open(e)
    assert m.mirrored() == g and r.reversed_time() == g
