"""Reproducible i.i.d. edge environments.

Every oriented edge carries its own uniform number, derived from
``(seed, x, t, side)`` by a counter-based 64-bit hash; the edge is open iff
that uniform is below ``p``.  Nothing is drawn sequentially, so any window
can be materialized in any order and the same seed couples all values of p.

The hash chains the SplitMix64 finalizer over the three coordinates::

    h = seed
    for w in (x, t, side):          # side: L -> 0, R -> 1
        h = mix64((h + 0x9E3779B97F4A7C15) ^ w)      # all mod 2**64
    uniform = (h >> 11) / 2**53

Test vectors (seed, x, t, side) -> h::

    (0, 0, 0, L)   -> 0x238275BC38FCBE91
    (0, 0, 0, R)   -> 0x421DAF3033E887A3
    (42, -3, 5, L) -> 0xBB076785A5A69B93
    (2**64 - 1, 7, -1, R) -> 0x233EE683F9A54DD5
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import ConfigParseError, InsufficientWindowError
from .lattice import EdgeRef, Side, Window, check_vertex, parse_edge

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def edge_hash(seed: int, edge: EdgeRef) -> int:
    (x, t), side = edge
    h = seed & MASK64
    for w in (x, t, 0 if side is Side.LEFT else 1):
        h = mix64(((h + GAMMA) & MASK64) ^ (w & MASK64))
    return h


def edge_uniform(seed: int, edge: EdgeRef) -> float:
    return (edge_hash(seed, edge) >> 11) * 2.0 ** -53


def _signed64(seed: int) -> int:
    seed &= MASK64
    return seed - (1 << 64) if seed >= 1 << 63 else seed


@dataclass(frozen=True)
class EdgeConfig:
    """The whole infinite environment, described by ``(seed, p)`` alone."""

    seed: int
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")

    def is_open(self, edge: EdgeRef) -> bool:
        return edge_uniform(self.seed, edge) < self.p

    def uniforms(self, window: Window) -> tuple[np.ndarray, np.ndarray]:
        """Per-edge uniforms over a window as (left, right) arrays (NaN off-lattice)."""
        ul = np.full((window.nt, window.nx), np.nan)
        ur = np.full((window.nt, window.nx), np.nan)
        _kernels.fill_uniforms(_signed64(self.seed), window.x_min, window.t_min,
                               window.nt, window.nx, ul, ur)
        return ul, ur

    def snapshot(self, window: Window) -> ExplicitConfig:
        left = np.zeros((window.nt, window.nx), dtype=np.bool_)
        right = np.zeros_like(left)
        _kernels.fill_open(_signed64(self.seed), float(self.p), window.x_min,
                           window.t_min, left, right)
        return ExplicitConfig(window, left, right, p=self.p, seed=self.seed,
                              _trusted=True)


class ExplicitConfig:
    """Open/closed flags for every edge with both endpoints in a window.

    ``left[row, col]`` / ``right[row, col]`` hold the upper edges of the site
    ``(x_min + col, t_min + row)``.
    """

    def __init__(self, window: Window, left, right, p=None, seed=None,
                 _trusted=False):
        self.window = window
        self.p = p
        self.seed = seed
        if _trusted:
            self.left, self.right = left, right
            return
        left = np.array(left, dtype=np.bool_)
        right = np.array(right, dtype=np.bool_)
        shape = (window.nt, window.nx)
        if left.shape != shape or right.shape != shape:
            raise ValueError(f"flag arrays must have shape {shape}")
        valid = _parity_mask(window)
        left &= valid
        right &= valid
        left[-1, :] = right[-1, :] = False
        left[:, 0] = False
        right[:, -1] = False
        self.left, self.right = left, right

    @classmethod
    def closed(cls, window: Window, **meta) -> ExplicitConfig:
        z = np.zeros((window.nt, window.nx), dtype=np.bool_)
        return cls(window, z, z.copy(), **meta)

    @classmethod
    def from_open_edges(cls, window: Window, edges: Iterable, **meta) -> ExplicitConfig:
        cfg = cls.closed(window, **meta)
        for e in edges:
            cfg._set(e, True)
        return cfg

    @classmethod
    def from_bits(cls, window: Window, bits: int) -> ExplicitConfig:
        """Bit ``k`` of ``bits`` opens the k-th edge of ``window.edges()``."""
        cfg = cls.closed(window)
        for k, e in enumerate(window.edges()):
            if bits >> k & 1:
                cfg._set(e, True)
        return cfg

    def _set(self, edge, flag: bool):
        edge = EdgeRef(check_vertex(edge[0]), Side(edge[1]))
        if not self.has_edge(edge):
            raise InsufficientWindowError(f"edge {edge} not inside {self.window}")
        i, j = self.window.index(edge.source)
        (self.left if edge.side is Side.LEFT else self.right)[i, j] = flag

    def has_edge(self, edge: EdgeRef) -> bool:
        return edge.source in self.window and edge.target in self.window

    def is_open(self, edge) -> bool:
        edge = EdgeRef(check_vertex(edge[0]), Side(edge[1]))
        if not self.has_edge(edge):
            raise InsufficientWindowError(f"edge {edge} not inside {self.window}")
        i, j = self.window.index(edge.source)
        return bool((self.left if edge.side is Side.LEFT else self.right)[i, j])

    def with_edge(self, edge, flag: bool) -> ExplicitConfig:
        out = ExplicitConfig(self.window, self.left.copy(), self.right.copy(),
                             p=self.p, seed=self.seed, _trusted=True)
        out._set(edge, flag)
        return out

    def restrict(self, window: Window) -> ExplicitConfig:
        if not self.window.contains_window(window):
            raise InsufficientWindowError(f"{window} is not inside {self.window}")
        if window == self.window:
            return self
        i0, j0 = self.window.index((window.x_min, window.t_min))
        sl = (slice(i0, i0 + window.nt), slice(j0, j0 + window.nx))
        left = self.left[sl].copy()
        right = self.right[sl].copy()
        left[-1, :] = right[-1, :] = False
        left[:, 0] = False
        right[:, -1] = False
        return ExplicitConfig(window, left, right, p=self.p, seed=self.seed,
                              _trusted=True)

    def mirrored(self) -> ExplicitConfig:
        """Column-negated copy: the edge (x, t, L) becomes (-x, t, R)."""
        w = self.window
        win = Window(-w.x_max, -w.x_min, w.t_min, w.t_max)
        return ExplicitConfig(win, self.right[:, ::-1].copy(),
                              self.left[:, ::-1].copy(), p=self.p, seed=self.seed,
                              _trusted=True)

    def reversed_time(self) -> ExplicitConfig:
        """Image under t -> -t: the edge (x, t) -> (x', t+1) becomes (x', -t-1) -> (x, -t)."""
        w = self.window
        win = Window(w.x_min, w.x_max, -w.t_max, -w.t_min)
        left = np.zeros_like(self.left)
        right = np.zeros_like(self.right)
        # old left edge from (col j, row i) lands at (j-1, i+1); reversed it leaves
        # new row nt-2-i at col j-1 going right
        left_src = self.left[:-1, :]
        right_src = self.right[:-1, :]
        right[-2::-1, :-1] |= left_src[:, 1:]
        left[-2::-1, 1:] |= right_src[:, :-1]
        return ExplicitConfig(win, left, right, p=self.p, seed=self.seed)

    def open_edges(self) -> list[EdgeRef]:
        return [e for e in self.window.edges() if self.is_open(e)]

    def n_edges(self) -> int:
        return sum(1 for _ in self.window.edges())

    def __eq__(self, other):
        if not isinstance(other, ExplicitConfig):
            return NotImplemented
        return (self.window == other.window and np.array_equal(self.left, other.left)
                and np.array_equal(self.right, other.right))

    def __repr__(self):
        return f"ExplicitConfig(window={self.window!s}, p={self.p}, seed={self.seed})"

    def to_text(self) -> str:
        p = "-" if self.p is None else repr(float(self.p))
        seed = "-" if self.seed is None else str(self.seed)
        lines = [f"window {self.window}; {p}; {seed}"]
        for e in self.window.edges():
            lines.append(f"{e},{int(self.is_open(e))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> ExplicitConfig:
        raw = text.splitlines()
        if not raw:
            raise ConfigParseError(1, "empty input")
        header = [s.strip() for s in raw[0].split(";")]
        if len(header) != 3 or not header[0].startswith("window"):
            raise ConfigParseError(1, "expected 'window x_min x_max t_min t_max; p; seed'")
        try:
            bounds = [int(v) for v in header[0].split()[1:]]
            window = Window(*bounds)
            p = None if header[1] == "-" else float(header[1])
            seed = None if header[2] == "-" else int(header[2])
        except (TypeError, ValueError) as exc:
            raise ConfigParseError(1, str(exc)) from None
        expected = list(window.edges())
        body = [(n, s) for n, s in enumerate(raw[1:], start=2) if s.strip()]
        cfg = cls.closed(window, p=p, seed=seed)
        for k, (lineno, line) in enumerate(body):
            try:
                head, _, flag = line.strip().rpartition(",")
                edge = parse_edge(head)
                if flag not in ("0", "1"):
                    raise ValueError(f"flag must be 0 or 1, got {flag!r}")
            except ValueError as exc:
                raise ConfigParseError(lineno, str(exc)) from None
            if k >= len(expected) or edge != expected[k]:
                raise ConfigParseError(lineno, f"unexpected edge {edge}; edges must be "
                                               "exactly those inside the window, "
                                               "sorted by (t, x, side)")
            cfg._set(edge, flag == "1")
        if len(body) != len(expected):
            raise ConfigParseError(len(raw) + 1, f"expected {len(expected)} edges, "
                                                 f"got {len(body)}")
        return cfg


@lru_cache(maxsize=256)
def _small_checkerboard(nt: int, nx: int, odd: int) -> np.ndarray:
    out = (np.add.outer(np.arange(nt), np.arange(nx)) + odd) % 2 == 0
    out.flags.writeable = False
    return out


def _parity_mask(window: Window) -> np.ndarray:
    """Read-only boolean array marking the lattice sites of ``window``."""
    odd = (window.x_min + window.t_min) % 2
    if window.nt * window.nx <= 4096:
        return _small_checkerboard(window.nt, window.nx, odd)
    return (np.add.outer(np.arange(window.nt), np.arange(window.nx)) + odd) % 2 == 0


def parity_mask(window: Window) -> np.ndarray:
    return _parity_mask(window)


def snapshot(cfg, window: Window) -> ExplicitConfig:
    """Materialize the flags of ``cfg`` over ``window``."""
    if isinstance(cfg, EdgeConfig):
        return cfg.snapshot(window)
    return cfg.restrict(window)


def materialize(cfg, window: Window) -> ExplicitConfig:
    """Like :func:`snapshot`, but failing loudly when an explicit config is too small."""
    if isinstance(cfg, ExplicitConfig) and not cfg.window.contains_window(window):
        raise InsufficientWindowError(
            f"query needs window {window} but the configuration covers {cfg.window}")
    return snapshot(cfg, window)
