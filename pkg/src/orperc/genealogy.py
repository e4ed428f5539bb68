"""The forest of right-most paths: kinship, precedence and the succession line.

Every percolating site follows its right-most path one step up to its
mother.  Daughters are the (at most two) sites below whose mother is a
given site; the one on the left lower edge is the older sister.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cmp_to_key
from typing import NamedTuple

import numpy as np

from . import _kernels
from .environment import materialize
from .errors import HorizonExhaustedError, NotInForestError, UndecidableError
from .kuczek import default_margin
from .lattice import Vertex, Window, check_vertex
from .reachability import co_reach_mask


class Branch(NamedTuple):
    vertices: frozenset
    truncated: bool


@dataclass(frozen=True)
class Kinship:
    vertex: Vertex
    mother: Vertex | None
    daughters: tuple[Vertex, ...] | None
    sigma: int | None
    forest: Forest

    def ancestor(self, n: int) -> Vertex:
        return self.forest.ancestor(self.vertex, n)


class Forest:
    """Restriction of the right-most-path forest to a window.

    Percolation means reaching the absolute level ``window.t_max + N``
    (the horizon).  The edge configuration is materialized over a larger
    region so that every site of the window, its ancestors, their sisters
    and descendants down to ``below`` levels under the window are decided
    exactly.  Answers that need levels above ``horizon - margin`` are
    reported as undecidable, never as negatives.
    """

    def __init__(self, window: Window, N: int, cfg, margin: int | None = None,
                 below: int = 0, pad: int = 2):
        if N < 1:
            raise ValueError("N must be at least 1")
        self.window = window
        self.N = N
        self.margin = default_margin(N) if margin is None else margin
        self.horizon = window.t_max + N
        self.certified_level = self.horizon - self.margin
        if self.certified_level <= window.t_max:
            raise ValueError("margin leaves no certified level above the window")
        span = (self.horizon - window.t_min) + 2 * below + pad
        self.region = Window(window.x_min - span, window.x_max + span,
                             window.t_min - below, self.horizon)
        grid = materialize(cfg, self.region)
        self.grid = grid
        self.co = co_reach_mask(grid, self.horizon)
        self.mdir = _kernels.mother_dirs(grid.left, grid.right, self.co,
                                         self.horizon - self.region.t_min)
        self._anc = None

    # -- membership ---------------------------------------------------------

    def exact(self, v) -> bool:
        x, t = v
        r = self.region
        if not r.t_min <= t <= r.t_max or (x + t) % 2:
            return False
        slack = self.horizon - t
        return r.x_min + slack <= x <= r.x_max - slack

    def __contains__(self, v) -> bool:
        return self.exact(v) and bool(self.co[self.region.index(v)])

    def _require(self, u) -> Vertex:
        u = check_vertex(u)
        if not self.exact(u):
            raise UndecidableError(f"{u} is outside the exactly decided region")
        if not self.co[self.region.index(u)]:
            raise NotInForestError(f"{u} does not reach the horizon {self.horizon}")
        return u

    @property
    def vertices(self) -> set[Vertex]:
        w, r = self.window, self.region
        i0, j0 = r.index((w.x_min, w.t_min))
        sub = self.co[i0:i0 + w.nt, j0:j0 + w.nx]
        rows, cols = np.nonzero(sub)
        return {Vertex(int(c) + w.x_min, int(rr) + w.t_min) for rr, c in zip(rows, cols)}

    # -- kinship ------------------------------------------------------------

    def _mother(self, u: Vertex):
        if u.t >= self.certified_level:
            return None
        d = int(self.mdir[self.region.index(u)])
        return Vertex(u.x + d, u.t + 1)

    def _daughters(self, u: Vertex):
        """Daughters, older first; None when they lie outside the decided region."""
        if u.t - 1 < self.region.t_min:
            return None
        out = []
        for dx in (-1, 1):
            d = Vertex(u.x + dx, u.t - 1)
            if not self.exact(d):
                return None
            i, j = self.region.index(d)
            if self.co[i, j] and self.mdir[i, j] == -dx:
                out.append(d)
        return tuple(out)

    def _sigma(self, u: Vertex, m: Vertex) -> int:
        if u.x == m.x + 1:
            older = Vertex(m.x - 1, u.t)
            if self.exact(older) and self.mdir[self.region.index(older)] == 1 \
                    and self.co[self.region.index(older)]:
                return 2
        return 1

    def mother(self, u) -> Vertex:
        u = self._require(u)
        m = self._mother(u)
        if m is None:
            raise HorizonExhaustedError(f"mother of {u} lies above the certified level")
        return m

    def daughters(self, u) -> tuple[Vertex, ...]:
        u = self._require(u)
        ds = self._daughters(u)
        if ds is None:
            raise UndecidableError(f"daughters of {u} lie below the decided region")
        return ds

    def sigma(self, u) -> int:
        """1 for an only daughter or the older of two sisters, 2 for the younger."""
        return self._sigma(check_vertex(u), self.mother(u))

    def ancestor(self, u, n: int) -> Vertex:
        u = self._require(u)
        for _ in range(n):
            m = self._mother(u)
            if m is None:
                raise HorizonExhaustedError(f"ancestor chain leaves the certified levels at {u}")
            u = m
        return u

    def kinship(self, u) -> Kinship:
        u = self._require(u)
        m = self._mother(u)
        return Kinship(u, m, self._daughters(u),
                       None if m is None else self._sigma(u, m), self)

    # -- order --------------------------------------------------------------

    def _climb(self, u: Vertex):
        m = self._mother(u)
        if m is None:
            raise UndecidableError("no common ancestor below the certified level")
        return m

    def precedes(self, u, v) -> bool:
        """Compare the sister orders just below the closest common ancestor."""
        u, v = self._require(u), self._require(v)
        below_u = below_v = None
        a, b = u, v
        while a.t < b.t:
            below_u, a = a, self._climb(a)
        while b.t < a.t:
            below_v, b = b, self._climb(b)
        while a != b:
            below_u, a = a, self._climb(a)
            below_v, b = b, self._climb(b)
        su = 0 if below_u is None else self._sigma(below_u, a)
        sv = 0 if below_v is None else self._sigma(below_v, b)
        return su < sv

    def successor(self, u):
        """Next site in the succession line, or None once the window runs out."""
        u = self._require(u)
        ds = self._daughters(u)
        if ds is None:
            return None
        if ds:
            return ds[0]
        a = u
        while True:
            m = self._mother(a)
            if m is None:
                return None
            if a.x == m.x - 1:
                sister = Vertex(m.x + 1, a.t)
                if not self.exact(sister):
                    return None
                i, j = self.region.index(sister)
                if self.co[i, j] and self.mdir[i, j] == -1:
                    return sister
            a = m

    def predecessor(self, u):
        u = self._require(u)
        m = self._mother(u)
        if m is None:
            return None
        if self._sigma(u, m) == 1:
            return m
        cur = Vertex(m.x - 1, u.t)
        while True:
            ds = self._daughters(cur)
            if ds is None:
                return None
            if not ds:
                return cur
            cur = ds[-1]

    def succession_line(self, u, k: int) -> list[Vertex]:
        """Pi^-k(u) .. u .. Pi^k(u), cut wherever the window runs out."""
        u = self._require(u)
        back, fwd = [], []
        cur = u
        for _ in range(k):
            cur = self.predecessor(cur)
            if cur is None:
                break
            back.append(cur)
        cur = u
        for _ in range(k):
            cur = self.successor(cur)
            if cur is None:
                break
            fwd.append(cur)
        line = back[::-1] + [u] + fwd
        if len(set(line)) != len(line):
            raise RuntimeError("succession line revisited a site")
        return line

    def sort_key(self):
        return cmp_to_key(lambda a, b: -1 if self.precedes(a, b)
                          else (1 if self.precedes(b, a) else 0))

    # -- branches and components -------------------------------------------

    def branch(self, u) -> Branch:
        """Descendants of ``u`` (itself included) and whether any were cut off."""
        u = self._require(u)
        seen = {u}
        stack = [u]
        truncated = False
        while stack:
            ds = self._daughters(stack.pop())
            if ds is None:
                truncated = True
                continue
            for d in ds:
                seen.add(d)
                stack.append(d)
        return Branch(frozenset(seen), truncated)

    def _ancestor_columns(self):
        if self._anc is None:
            row = self.certified_level - self.region.t_min
            self._anc = _kernels.ancestor_at(self.mdir, self.co, row, 0)
        return self._anc

    def component(self, u) -> int:
        """Column of the ancestor on the certified level; equal labels mean one component."""
        u = self._require(u)
        if u.t > self.certified_level:
            raise UndecidableError(f"{u} lies above the certified level")
        return int(self._ancestor_columns()[self.region.index(u)]) + self.region.x_min

    def components(self) -> dict[int, list[Vertex]]:
        groups = defaultdict(list)
        for v in sorted(self.vertices, key=lambda v: (v.t, v.x)):
            groups[self.component(v)].append(v)
        return dict(groups)

    # -- serialization ------------------------------------------------------

    def to_edge_list(self) -> str:
        lines = ["child_x,child_t,mother_x,mother_t,sigma"]
        for v in sorted(self.vertices, key=lambda v: (v.t, v.x)):
            m = self._mother(v)
            if m is not None:
                lines.append(f"{v.x},{v.t},{m.x},{m.t},{self._sigma(v, m)}")
        return "\n".join(lines) + "\n"


def build_forest(window: Window, N: int, cfg, margin: int | None = None,
                 below: int = 0) -> Forest:
    return Forest(window, N, cfg, margin=margin, below=below)


def kinship(u, forest: Forest) -> Kinship:
    return forest.kinship(u)


def precedes(u, v, forest: Forest) -> bool:
    return forest.precedes(u, v)


def successor(u, forest: Forest):
    return forest.successor(u)


def predecessor(u, forest: Forest):
    return forest.predecessor(u)


def succession_line(u, k: int, forest: Forest) -> list[Vertex]:
    return forest.succession_line(u, k)


def branch(u, forest: Forest) -> Branch:
    return forest.branch(u)


def format_line(line) -> str:
    return "x,t\n" + "".join(f"{x},{t}\n" for x, t in line)
