"""Every explicit configuration of a small window against the path oracle."""
from collections import Counter

import oracle
from orperc import (Direction, ExplicitConfig, NoPathError, Side, Window, anti_leftmost_path,
                    buds, cluster, leftmost_path, percolates_to, rightmost_path)
from orperc.lattice import cone_window

WINDOWS = (Window(-2, 2, 0, 2), Window(-3, 3, 0, 2), Window(-2, 4, 0, 2),
           Window(-2, 2, 0, 3), Window(-1, 3, 0, 3), Window(-1, 2, 0, 4))


def _queries(window):
    fwd, back = [], []
    for u in window.vertices():
        for n in range(1, window.nt):
            if window.contains_window(cone_window(u, n)):
                fwd.append((u, n))
            if window.contains_window(cone_window(u, n, Direction.BACKWARD)):
                back.append((u, n))
    return fwd, back


def check_window(window: Window) -> Counter:
    """Mismatch counts per operation (all zero when everything agrees)."""
    edges = list(window.edges())
    assert len(edges) <= 16
    fwd, back = _queries(window)
    verts = list(window.vertices())
    bad = Counter()
    for bits in range(1 << len(edges)):
        cfg = ExplicitConfig.from_bits(window, bits)
        opened = oracle.open_set(window, bits)
        for u in verts:
            bad["cluster"] += cluster(u, cfg) != oracle.reachable(u, opened)
        for u, n in fwd:
            paths = oracle.paths_up(u, n, opened)
            bad["percolates_to"] += percolates_to(u, n, cfg) != bool(paths)
            for fn, prefer in ((rightmost_path, "R"), (leftmost_path, "L")):
                try:
                    got = fn(u, n, cfg).steps
                except NoPathError:
                    got = None
                bad[fn.__name__] += got != oracle.extremal(paths, prefer)
            if paths and n == window.t_max - u.t:
                steps = oracle.extremal(paths, "R")
                path = rightmost_path(u, n, cfg)
                for v in path.vertices:
                    for side in (Side.LEFT, Side.RIGHT):
                        want = oracle.buds(v, u, steps, side.value, opened)
                        bad["buds"] += buds(v, path, side, cfg) != want
        for u, n in back:
            try:
                got = anti_leftmost_path(u, n, cfg).steps
            except NoPathError:
                got = None
            bad["anti_leftmost_path"] += got != oracle.extremal(oracle.paths_down(u, n, opened), "L")
    return bad
