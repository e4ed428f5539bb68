import pytest
from hypothesis import given, strategies as st

from orperc import Direction, EdgeRef, InvalidVertexError, Side, Vertex, Window, cone
from orperc.lattice import (cone_of_set, cone_window, lower_parents, parse_edge,
                            parse_vertex, upper_children)

sites = st.tuples(st.integers(-50, 50), st.integers(-50, 50)).map(
    lambda v: (v[0] * 2 + v[1] % 2, v[1]))


def test_upper_children():
    assert upper_children((0, 0)) == ((-1, 1), (1, 1))
    assert upper_children((2, 2)) == ((1, 3), (3, 3))
    with pytest.raises(InvalidVertexError):
        upper_children((1, 0))


def test_lower_parents():
    assert lower_parents((0, 2)) == ((-1, 1), (1, 1))
    assert lower_parents((1, 1)) == ((0, 0), (2, 0))


def test_adjacency_inverse_on_window():
    for v in Window(-4, 4, -3, 3).vertices():
        for w in lower_parents(v):
            assert v in upper_children(w)
        for w in upper_children(v):
            assert v in lower_parents(w)


def test_cone_examples():
    assert cone((0, 0), Direction.FORWARD, 2) == {(0, 0), (-1, 1), (1, 1), (-2, 2), (0, 2), (2, 2)}
    assert cone((0, 0), Direction.FORWARD, 0) == {(0, 0)}
    assert cone((0, 2), Direction.BACKWARD, 2) == {(0, 2), (-1, 1), (1, 1), (-2, 0), (0, 0), (2, 0)}


def test_cone_errors():
    with pytest.raises(ValueError):
        cone((0, 0), Direction.FORWARD, -1)
    with pytest.raises(ValueError):
        cone_of_set([(0, 0), (1, 1)], Direction.FORWARD, 1)
    assert cone_of_set([(0, 0), (4, 0)], Direction.FORWARD, 1) == {
        (0, 0), (4, 0), (-1, 1), (1, 1), (3, 1), (5, 1)}


@given(sites, st.integers(0, 8))
def test_cone_light_cone_bound(u, n):
    c = cone(u, Direction.FORWARD, n)
    for k in range(n + 1):
        level = [v for v in c if v[1] == u[1] + k]
        assert len(level) == k + 1
        assert all(abs(v[0] - u[0]) <= k for v in level)


@given(sites, sites, st.integers(0, 6))
def test_cone_duality(u, v, n):
    assert (tuple(v) in cone(u, Direction.FORWARD, n)) == (tuple(u) in cone(v, Direction.BACKWARD, n))


def test_edge_targets():
    assert EdgeRef(Vertex(0, 0), Side.LEFT).target == (-1, 1)
    assert EdgeRef(Vertex(0, 0), Side.RIGHT).target == (1, 1)


def test_window_validation_and_contents():
    with pytest.raises(ValueError):
        Window(1, 0, 0, 0)
    with pytest.raises(ValueError):
        Window(1, 1, 0, 0)    # only (1, 0), which is off the lattice
    w = Window(-1, 1, 0, 1)
    assert list(w.vertices()) == [(0, 0), (-1, 1), (1, 1)]
    assert (0, 0) in w and (1, 0) not in w and (0, 2) not in w
    assert [str(e) for e in w.edges()] == ["0,0,L", "0,0,R"]
    assert cone_window((0, 0), 3) == Window(-3, 3, 0, 3)
    assert cone_window((0, 0), 3, Direction.BACKWARD) == Window(-3, 3, -3, 0)


def test_parsing():
    assert parse_vertex("-2,4") == (-2, 4)
    assert parse_edge("3,1,R") == EdgeRef((3, 1), Side.RIGHT)
    with pytest.raises(ValueError):
        parse_vertex("1,2")
    with pytest.raises(ValueError):
        parse_edge("0,0,X")
