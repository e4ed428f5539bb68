"""Right-most and left-most open paths, buds and side clusters."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .environment import EdgeConfig, ExplicitConfig, materialize, parity_mask
from .errors import NoPathError, NotOnPathError, OutOfWindowError
from .lattice import Direction, EdgeRef, Side, Vertex, Window, check_vertex, cone_window
from .reachability import co_reach_mask, mask_to_set


@dataclass(frozen=True)
class PathRec:
    """A finite open path given by its origin and L/R moves.

    ``direction`` is +1 for ordinary oriented paths and -1 for anti-oriented
    ones, which step down one level per move.
    """

    origin: Vertex
    steps: str
    direction: int = 1

    def __post_init__(self):
        object.__setattr__(self, "origin", check_vertex(self.origin))
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        x, t = self.origin
        out = [Vertex(x, t)]
        for s in self.steps:
            x += -1 if s == "L" else 1
            t += self.direction
            out.append(Vertex(x, t))
        return tuple(out)

    @cached_property
    def _index(self) -> dict:
        return {v: k for k, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.steps)

    def __contains__(self, v):
        return tuple(v) in self._index

    def position(self, v) -> int:
        try:
            return self._index[tuple(v)]
        except KeyError:
            raise NotOnPathError(f"{tuple(v)} is not on the path") from None

    def column_at(self, level: int):
        k = (level - self.origin.t) * self.direction
        if 0 <= k <= len(self.steps):
            return self.vertices[k].x
        return None

    def edges(self) -> list[EdgeRef]:
        """Traversed edges, each written in the upward lattice orientation."""
        vs = self.vertices
        out = []
        for a, b in zip(vs, vs[1:]):
            lo, hi = (a, b) if b.t > a.t else (b, a)
            out.append(EdgeRef(lo, Side.LEFT if hi.x < lo.x else Side.RIGHT))
        return out

    def to_text(self) -> str:
        tail = "; anti" if self.direction < 0 else ""
        return f"origin {self.origin}; steps {self.steps}{tail}"

    @classmethod
    def from_text(cls, text: str) -> PathRec:
        parts = [p.strip() for p in text.strip().split(";")]
        if len(parts) not in (2, 3) or not parts[0].startswith("origin"):
            raise ValueError(f"bad path record {text!r}")
        x, t = parts[0].split()[1].split(",")
        steps = parts[1].split()[1] if len(parts[1].split()) > 1 else ""
        direction = -1 if len(parts) == 3 and parts[2] == "anti" else 1
        if set(steps) - {"L", "R"}:
            raise ValueError(f"bad steps {steps!r}")
        return cls(check_vertex((int(x), int(t))), steps, direction)


def greedy_path(grid: ExplicitConfig, allowed: np.ndarray, u, length: int,
                prefer: Side = Side.RIGHT) -> PathRec:
    """Walk up ``length`` levels from ``u`` through ``allowed`` sites,
    taking the preferred side whenever its edge is open and its target allowed."""
    w = grid.window
    i, j = w.index(u)
    first, second = (grid.right, grid.left) if prefer is Side.RIGHT else (grid.left, grid.right)
    d1 = prefer.dx
    steps = []
    for _ in range(length):
        if first[i, j] and allowed[i + 1, j + d1]:
            j += d1
            steps.append(prefer.value)
        elif second[i, j] and allowed[i + 1, j - d1]:
            j -= d1
            steps.append("L" if prefer is Side.RIGHT else "R")
        else:
            raise NoPathError(f"no allowed continuation above {(j + w.x_min, i + w.t_min)}")
        i += 1
    return PathRec(Vertex(*u), "".join(steps))


def _extremal(u, N: int, cfg, prefer: Side) -> PathRec:
    if N < 1:
        raise ValueError("N must be at least 1")
    u = check_vertex(u)
    window = cone_window(u, N)
    grid = materialize(cfg, window)
    co = co_reach_mask(grid, u.t + N)
    if not co[window.index(u)]:
        raise NoPathError(f"{u} does not percolate to height {N}")
    return greedy_path(grid, co, u, N, prefer)


def rightmost_path(u, N: int, cfg) -> PathRec:
    """The right-most open path from ``u`` to level ``t(u) + N``.

    Restricted to sites that still reach the horizon, the path takes the
    right edge whenever it can; at every level no site strictly to its right
    is both reachable from ``u`` and able to reach the horizon.
    """
    return _extremal(u, N, cfg, Side.RIGHT)


def leftmost_path(u, N: int, cfg) -> PathRec:
    return _extremal(u, N, cfg, Side.LEFT)


def anti_leftmost_path(u, depth: int, cfg) -> PathRec:
    """Left-most anti-oriented open path from ``u`` down ``depth`` levels."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    u = check_vertex(u)
    window = cone_window(u, depth, Direction.BACKWARD)
    grid = materialize(cfg, window)
    reach = np.zeros((window.nt, window.nx), dtype=np.bool_)
    reach[0] = parity_mask(Window(window.x_min, window.x_max, window.t_min, window.t_min))[0]
    _kernels.sweep_up(grid.left, grid.right, reach, 0, window.nt - 1)
    i, j = window.index(u)
    if not reach[i, j]:
        raise NoPathError(f"{u} is not reached from {depth} levels below")
    steps = []
    for _ in range(depth):
        # the lower-left site enters (j, i) through its right edge
        if j > 0 and grid.right[i - 1, j - 1] and reach[i - 1, j - 1]:
            j -= 1
            steps.append("L")
        elif j < window.nx - 1 and grid.left[i - 1, j + 1] and reach[i - 1, j + 1]:
            j += 1
            steps.append("R")
        else:
            raise NoPathError("anti-oriented path broke off")  # unreachable
        i -= 1
    return PathRec(u, "".join(steps), direction=-1)


def _without_path(grid: ExplicitConfig, path: PathRec):
    left = grid.left.copy()
    right = grid.right.copy()
    w = grid.window
    for e in path.edges():
        if e.source in w and e.target in w:
            i, j = w.index(e.source)
            (left if e.side is Side.LEFT else right)[i, j] = False
    return left, right


def _side_filter(reach: np.ndarray, path: PathRec, side: Side, window: Window) -> set[Vertex]:
    """Sites of ``reach`` strictly on ``side`` of the path, on levels the path spans."""
    col = np.full(window.nt, np.iinfo(np.int64).max if side is Side.RIGHT
                  else np.iinfo(np.int64).min, dtype=np.int64)
    for x, t in path.vertices:
        if window.t_min <= t <= window.t_max:
            col[t - window.t_min] = x
    xs = np.arange(window.x_min, window.x_max + 1)[None, :]
    keep = xs > col[:, None] if side is Side.RIGHT else xs < col[:, None]
    return mask_to_set(reach & keep, window)


def _window_for(cfg, window):
    if window is None:
        if isinstance(cfg, EdgeConfig):
            raise ValueError("a window is required with an unbounded EdgeConfig")
        return cfg.window
    return window


def _bud_reach(sources, path: PathRec, cfg, window: Window) -> np.ndarray:
    grid = materialize(cfg, window)
    left, right = _without_path(grid, path)
    reach = np.zeros((window.nt, window.nx), dtype=np.bool_)
    lowest = window.nt
    for v in sources:
        if v not in window:
            raise OutOfWindowError(f"{v} outside {window}")
        i, j = window.index(v)
        reach[i, j] = True
        lowest = min(lowest, i)
    if lowest < window.nt:
        _kernels.sweep_up(left, right, reach, lowest, window.nt - 1)
    return reach


def buds(v, path: PathRec, side: Side, cfg, window: Window | None = None) -> set[Vertex]:
    """Off-path sites on one side of ``path`` reachable from ``v`` without
    using any edge of the path.  Only levels spanned by the path get a side."""
    v = check_vertex(v)
    path.position(v)
    window = _window_for(cfg, window)
    return _side_filter(_bud_reach([v], path, cfg, window), path, side, window)


def side_cluster(path: PathRec, u, v, side: Side, cfg,
                 window: Window | None = None) -> set[Vertex]:
    """Union of the buds planted on the piece of ``path`` from ``u`` up to, but
    excluding, ``v``."""
    a, b = path.position(u), path.position(v)
    if a >= b:
        raise ValueError(f"{tuple(u)} must come before {tuple(v)} on the path")
    window = _window_for(cfg, window)
    sources = path.vertices[a:b]
    return _side_filter(_bud_reach(sources, path, cfg, window), path, side, window)


def stabilization_prefix(u, cfg, N1: int, N2: int) -> int:
    """Number of levels on which the right-most paths for horizons N1 and N2 agree."""
    if N1 > N2:
        raise ValueError("need N1 <= N2")
    long = rightmost_path(u, N2, cfg)
    short = rightmost_path(u, N1, cfg)
    h = 0
    for a, b in zip(short.vertices[1:], long.vertices[1:]):
        if a != b:
            break
        h += 1
    return h
