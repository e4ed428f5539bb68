"""Right edge, break points, embedded walks and meeting detection."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .environment import materialize, parity_mask
from .errors import InsufficientWindowError, NoPathError
from .lattice import Side, Vertex, Window, check_vertex
from .paths import PathRec, greedy_path
from .reachability import co_reach_mask


def default_margin(N: int) -> int:
    return N // 5


class BreakRecord(NamedTuple):
    m: int
    T: int
    X: int
    tau: int


@dataclass(frozen=True)
class BreakPointSeries:
    """Break points of one origin; ``T`` is measured in levels above the origin."""

    origin: Vertex
    N: int
    margin: int
    records: tuple[BreakRecord, ...]

    @property
    def X(self) -> np.ndarray:
        return np.array([r.X for r in self.records], dtype=np.int64)

    @property
    def tau(self) -> np.ndarray:
        return np.array([r.tau for r in self.records], dtype=np.int64)

    @property
    def T(self) -> np.ndarray:
        return np.array([r.T for r in self.records], dtype=np.int64)

    def vertices(self) -> list[Vertex]:
        """Absolute break-point sites (origin excluded)."""
        x0, t0 = self.origin
        cols = x0 + np.cumsum(self.X)
        return [Vertex(int(c), t0 + int(T)) for c, T in zip(cols, self.T)]

    def to_csv(self) -> str:
        return "m,T,X,tau\n" + "".join(f"{r.m},{r.T},{r.X},{r.tau}\n" for r in self.records)


@dataclass(frozen=True)
class WalkPath:
    """Step function jumping at break levels; positions relative to the origin."""

    origin: Vertex
    jumps: tuple[tuple[int, int], ...]    # (level offset, position)

    def position_at(self, level_offset: int) -> int:
        pos = 0
        for T, x in self.jumps:
            if T > level_offset:
                break
            pos = x
        return pos

    def absolute_jumps(self) -> list[Vertex]:
        x0, t0 = self.origin
        return [Vertex(x0 + x, t0 + T) for T, x in self.jumps]

    def to_csv(self) -> str:
        return "level,column\n" + "".join(f"{T},{x}\n" for T, x in self.jumps)


def right_edge_series(cfg, N: int) -> list[tuple[int, int | None, bool]]:
    """``(n, r_n, truncated)`` for the right edge started from the half line x <= 0.

    The half line is cut at column -2N; values below -N (or extinction of the
    cut system) are flagged since sites left of the cut could matter there.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    window = Window(-2 * N, max(N, 1), 0, N)
    grid = materialize(cfg, window)
    reach = np.zeros((window.nt, window.nx), dtype=np.bool_)
    row0 = parity_mask(Window(window.x_min, window.x_max, 0, 0))[0]
    reach[0, :2 * N + 1] = row0[:2 * N + 1]
    out = np.empty(window.nt, dtype=np.int64)
    _kernels.right_edge_rows(grid.left, grid.right, reach, 0, window.nt - 1, out)
    series = []
    for n, j in enumerate(out):
        if j < 0:
            series.append((n, None, N > 0))
        else:
            r = int(j) + window.x_min
            series.append((n, r, r < -N))
    return series


def _shared_grid(origins, cfg, H: int):
    lo = min(x - (H - t) for x, t in origins)
    hi = max(x + (H - t) for x, t in origins)
    t0 = min(t for _, t in origins)
    window = Window(lo, hi, t0, H)
    grid = materialize(cfg, window)
    co = co_reach_mask(grid, H)
    return grid, co


def _break_records(grid, co, u: Vertex, H: int, cutoff: int) -> list[BreakRecord]:
    w = grid.window
    i0, j0 = w.index(u)
    top = H - w.t_min
    reach = np.zeros((top - i0 + 1, w.nx), dtype=np.bool_)
    reach[0, j0] = True
    edges = np.empty(top - i0 + 1, dtype=np.int64)
    _kernels.right_edge_rows(grid.left[i0:top + 1], grid.right[i0:top + 1], reach,
                             0, top - i0, edges)
    records = []
    last_T, last_j = 0, j0
    for n in range(1, min(cutoff - u.t, H - u.t) + 1):
        j = edges[n]
        if j >= 0 and co[i0 + n, j]:
            records.append(BreakRecord(len(records) + 1, n, int(j - last_j), n - last_T))
            last_T, last_j = n, j
    return records


def break_points(u, cfg, N: int, margin: int | None = None) -> BreakPointSeries:
    """Break-point records of ``u`` with horizon ``t(u) + N``.

    A level counts when the right-most site reachable from ``u`` at that level
    itself reaches the horizon; records above ``N - margin`` are dropped.
    """
    u = check_vertex(u)
    margin = default_margin(N) if margin is None else margin
    H = u.t + N
    grid, co = _shared_grid([u], cfg, H)
    if not co[grid.window.index(u)]:
        raise NoPathError(f"{u} does not percolate to height {N}")
    return BreakPointSeries(u, N, margin, tuple(_break_records(grid, co, u, H, H - margin)))


def walk(u, cfg, N: int, margin: int | None = None) -> WalkPath:
    bp = break_points(u, cfg, N, margin)
    pos = np.cumsum(bp.X)
    return WalkPath(bp.origin, tuple((int(T), int(x)) for T, x in zip(bp.T, pos)))


def _pair_setup(u1, u2, N, margin):
    u1, u2 = check_vertex(u1), check_vertex(u2)
    margin = default_margin(N) if margin is None else margin
    H = max(u1.t, u2.t) + N
    return u1, u2, H, H - margin


def _first_common(a: list[Vertex], b: list[Vertex], lowest: int, cutoff: int):
    common = set(a) & set(b)
    hits = [v for v in common if lowest <= v.t <= cutoff]
    return min(hits, key=lambda v: v.t) if hits else None


def walks_meet(u1, u2, cfg, N: int, margin: int | None = None):
    """First site where both walks jump at the same level to the same column.

    Both walks share the horizon ``max(t1, t2) + N``; only levels up to
    ``horizon - margin`` are certified.  Returns ``None`` when no meeting is
    certified.
    """
    u1, u2, H, cutoff = _pair_setup(u1, u2, N, margin)
    grid, co = _shared_grid([u1, u2], cfg, H)
    w = grid.window
    for u in (u1, u2):
        if not co[w.index(u)]:
            raise NoPathError(f"{u} does not percolate to level {H}")
    jumps = []
    for u in (u1, u2):
        recs = _break_records(grid, co, u, H, cutoff)
        bp = BreakPointSeries(u, H - u.t, H - cutoff, tuple(recs))
        jumps.append(bp.vertices())
    return _first_common(jumps[0], jumps[1], max(u1.t, u2.t), cutoff)


_PAIR_KINDS = {"rr": (Side.RIGHT, Side.RIGHT), "ll": (Side.LEFT, Side.LEFT),
               "rl": (Side.RIGHT, Side.LEFT)}


def paths_meet(u1, u2, cfg, N: int, margin: int | None = None, kind: str = "rr"):
    """Lowest common site of the extremal paths of ``u1`` and ``u2``.

    ``kind`` picks (right-most, right-most), (left-most, left-most) or
    (right-most from u1, left-most from u2).
    """
    if kind not in _PAIR_KINDS:
        raise ValueError(f"kind must be one of {sorted(_PAIR_KINDS)}")
    u1, u2, H, cutoff = _pair_setup(u1, u2, N, margin)
    grid, co = _shared_grid([u1, u2], cfg, H)
    w = grid.window
    paths = []
    for u, prefer in zip((u1, u2), _PAIR_KINDS[kind]):
        if not co[w.index(u)]:
            raise NoPathError(f"{u} does not percolate to level {H}")
        paths.append(greedy_path(grid, co, u, H - u.t, prefer).vertices)
    return _first_common(list(paths[0]), list(paths[1]), max(u1.t, u2.t), cutoff)


def crossing_points(path: PathRec, alpha: float) -> list[Vertex]:
    """Path sites whose incoming edge touches the line t = x / alpha through the origin.

    Coordinates are taken relative to the path origin; a segment counts when
    its endpoints are on opposite closed sides of the line.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    x0, t0 = path.origin
    vs = path.vertices
    g = [alpha * (t - t0) - (x - x0) for x, t in vs]
    return [vs[k] for k in range(1, len(vs)) if g[k - 1] * g[k] <= 0]


def count_crossings(columns: np.ndarray, alpha: float) -> int:
    """Vectorized count for a path given as columns relative to its origin, level k at index k."""
    k = np.arange(len(columns))
    g = alpha * k - columns
    return int(np.count_nonzero(g[:-1] * g[1:] <= 0))
