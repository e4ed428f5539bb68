"""Oriented reachability: frontiers, clusters, anti-clusters, percolation sets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .environment import EdgeConfig, ExplicitConfig, materialize, parity_mask
from .errors import InsufficientWindowError, OutOfWindowError
from .lattice import Direction, Vertex, Window, check_vertex, cone_window


@dataclass(frozen=True)
class Frontier:
    """Occupied columns on one level (the set written xi_n in the theory)."""

    level: int
    columns: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(sorted(set(int(c) for c in self.columns)))
        for c in cols:
            check_vertex((c, self.level))
        object.__setattr__(self, "columns", cols)

    @property
    def right_edge(self):
        return self.columns[-1] if self.columns else None


@dataclass(frozen=True)
class PercSet:
    """Finite-volume stand-in for the set of percolation points.

    Members reach ``N`` levels above themselves (or the absolute level
    ``horizon_level`` when that is set); with ``bidirectional`` they are also
    reached from ``N`` levels below.
    """

    window: Window
    N: int
    members: frozenset = field(default_factory=frozenset)
    bidirectional: bool = False
    horizon_level: int | None = None

    def __contains__(self, v):
        return tuple(v) in self.members

    def __len__(self):
        return len(self.members)

    def to_text(self) -> str:
        lines = [f"N={self.N} bidirectional={int(self.bidirectional)}"]
        lines += format_vertices(self.members).splitlines()
        return "\n".join(lines) + "\n"


def format_vertices(vertices: Iterable) -> str:
    """Sorted (by level, then column) ``x,t`` lines."""
    rows = sorted((v[1], v[0]) for v in vertices)
    return "".join(f"{x},{t}\n" for t, x in rows)


def _require_window(cfg, window):
    if window is None:
        if isinstance(cfg, EdgeConfig):
            raise ValueError("a window is required with an unbounded EdgeConfig")
        return cfg.window
    return window


def _check_in(u, window: Window) -> Vertex:
    u = check_vertex(u)
    if u not in window:
        raise OutOfWindowError(f"{u} outside window {window}")
    return u


def mask_to_set(mask: np.ndarray, window: Window) -> set[Vertex]:
    rows, cols = np.nonzero(mask)
    return set(map(Vertex, (cols + window.x_min).tolist(), (rows + window.t_min).tolist()))


def _step(cur, left_row, right_row):
    nxt = np.zeros_like(cur)
    nxt[:-1] |= cur[1:] & left_row[1:]
    nxt[1:] |= cur[:-1] & right_row[:-1]
    return nxt


def evolve_frontier(A: Frontier, steps: int, cfg, window: Window | None = None,
                    pruned: bool = False) -> list[Frontier]:
    """Frontiers xi_0..xi_steps started from ``A``.

    With ``pruned`` an empty level is replaced by the single column
    ``max(A) + k`` (k levels above A) and the evolution continues from it.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if not A.columns:
        raise ValueError("initial frontier is empty")
    if window is None:
        window = Window(A.columns[0] - steps, A.columns[-1] + steps,
                        A.level, A.level + steps)
    for c in A.columns:
        _check_in((c, A.level), window)
    if A.level + steps > window.t_max:
        raise OutOfWindowError(f"{steps} steps from level {A.level} leave {window}")
    grid = materialize(cfg, window)
    i0 = A.level - window.t_min
    cur = np.zeros(window.nx, dtype=np.bool_)
    cur[np.asarray(A.columns) - window.x_min] = True
    out = [A]
    anchor = A.columns[-1]
    for k in range(1, steps + 1):
        cur = _step(cur, grid.left[i0 + k - 1], grid.right[i0 + k - 1])
        if pruned and not cur.any():
            col = anchor + k
            if not window.x_min <= col <= window.x_max:
                raise OutOfWindowError(f"substituted column {col} outside {window}")
            cur[col - window.x_min] = True
        cols = tuple(int(j) + window.x_min for j in np.flatnonzero(cur))
        out.append(Frontier(A.level + k, cols))
    return out


def cluster_mask(grid: ExplicitConfig, sources) -> np.ndarray:
    """Sites of ``grid`` reachable from any of ``sources``."""
    w = grid.window
    reach = np.zeros((w.nt, w.nx), dtype=np.bool_)
    lowest = w.nt
    for u in sources:
        u = _check_in(u, w)
        i, j = w.index(u)
        reach[i, j] = True
        lowest = min(lowest, i)
    if lowest < w.nt:
        _kernels.sweep_up(grid.left, grid.right, reach, lowest, w.nt - 1)
    return reach


def co_reach_mask(grid: ExplicitConfig, level: int, row_bottom: int = 0) -> np.ndarray:
    """Sites of ``grid`` that reach level ``level`` (which must lie in the window)."""
    w = grid.window
    top = level - w.t_min
    if not 0 <= top < w.nt:
        raise InsufficientWindowError(f"level {level} outside {w}")
    co = np.zeros((w.nt, w.nx), dtype=np.bool_)
    co[top] = parity_mask(Window(w.x_min, w.x_max, level, level))[0]
    _kernels.sweep_co(grid.left, grid.right, co, top, row_bottom)
    return co


def anti_mask(grid: ExplicitConfig, targets) -> np.ndarray:
    """Sites of ``grid`` from which some target is reachable."""
    w = grid.window
    anti = np.zeros((w.nt, w.nx), dtype=np.bool_)
    top = -1
    for u in targets:
        u = _check_in(u, w)
        i, j = w.index(u)
        anti[i, j] = True
        top = max(top, i)
    if top > 0:
        _kernels.sweep_down(grid.left, grid.right, anti, top, 0)
    return anti


def cluster(u, cfg, window: Window | None = None) -> set[Vertex]:
    """The forward cluster of ``u`` intersected with ``window``."""
    window = _require_window(cfg, window)
    u = _check_in(u, window)
    grid = materialize(cfg, window)
    return mask_to_set(cluster_mask(grid, [u]), window)


def anti_cluster(u, cfg, depth: int) -> set[Vertex]:
    """Sites at most ``depth`` levels below ``u`` from which ``u`` is reachable."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    u = check_vertex(u)
    window = cone_window(u, depth, Direction.BACKWARD)
    grid = materialize(cfg, window)
    return mask_to_set(anti_mask(grid, [u]), window)


def percolates_to(u, N: int, cfg) -> bool:
    """True iff some site ``N`` levels above ``u`` is reachable from ``u``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    u = check_vertex(u)
    window = cone_window(u, N)
    if isinstance(cfg, ExplicitConfig) and not cfg.window.contains_window(window):
        raise InsufficientWindowError(
            f"percolation to height {N} from {u} needs {window}; have {cfg.window}")
    grid = materialize(cfg, window)
    return bool(cluster_mask(grid, [u])[-1].any())


def perc_points(window: Window, N: int, cfg, bidirectional: bool = False,
                horizon_level: int | None = None) -> PercSet:
    """All sites of ``window`` that percolate to height ``N``.

    ``horizon_level`` swaps the per-site relative height for one absolute
    level shared by every site, the convention used by forests.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    top = window.t_max + N if horizon_level is None else horizon_level
    if top <= window.t_max:
        raise ValueError("horizon must lie above the window")
    reach_up = top - window.t_min
    down = N if bidirectional else 0
    big = Window(window.x_min - max(reach_up, down), window.x_max + max(reach_up, down),
                 window.t_min - down, top)
    grid = materialize(cfg, big)
    w0i, w0j = big.index((window.x_min, window.t_min))
    cols = slice(w0j, w0j + window.nx)
    members = np.zeros((window.nt, window.nx), dtype=np.bool_)
    if horizon_level is not None:
        co = co_reach_mask(grid, top, row_bottom=w0i)
        members[:] = co[w0i:w0i + window.nt, cols]
    else:
        for r in range(window.nt):
            t = window.t_min + r
            co = co_reach_mask(grid, t + N, row_bottom=w0i + r)
            members[r] = co[w0i + r, cols]
    if bidirectional:
        for r in range(window.nt):
            t = window.t_min + r
            i_src = t - N - big.t_min
            reach = np.zeros((big.nt, big.nx), dtype=np.bool_)
            reach[i_src] = parity_mask(Window(big.x_min, big.x_max, t - N, t - N))[0]
            _kernels.sweep_up(grid.left, grid.right, reach, i_src, w0i + r)
            members[r] &= reach[w0i + r, cols]
    return PercSet(window, N, frozenset(mask_to_set(members, window)),
                   bidirectional, horizon_level)


def symmetric_difference(u1, u2, cfg, window: Window | None = None) -> set[Vertex]:
    window = _require_window(cfg, window)
    u1 = _check_in(u1, window)
    u2 = _check_in(u2, window)
    grid = materialize(cfg, window)
    diff = cluster_mask(grid, [u1]) ^ cluster_mask(grid, [u2])
    return mask_to_set(diff, window)
