"""Geometry of the even oriented lattice.

Sites are ``(x, t)`` with ``x + t`` even.  The level ``t`` grows upward and
every site has two upper edges, to ``(x - 1, t + 1)`` and ``(x + 1, t + 1)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidVertexError


class Vertex(NamedTuple):
    x: int
    t: int

    def __str__(self):
        return f"{self.x},{self.t}"


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def dx(self) -> int:
        return -1 if self is Side.LEFT else 1


class Direction(enum.Enum):
    FORWARD = 1
    BACKWARD = -1


class EdgeRef(NamedTuple):
    source: Vertex
    side: Side

    @property
    def target(self) -> Vertex:
        return Vertex(self.source.x + self.side.dx, self.source.t + 1)

    def __str__(self):
        return f"{self.source.x},{self.source.t},{self.side.value}"


def check_vertex(v) -> Vertex:
    x, t = int(v[0]), int(v[1])
    if (x + t) % 2:
        raise InvalidVertexError(f"({x},{t}) has odd parity")
    return Vertex(x, t)


def parse_vertex(text: str) -> Vertex:
    parts = text.strip().split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,t', got {text!r}")
    return check_vertex((int(parts[0]), int(parts[1])))


def parse_edge(text: str) -> EdgeRef:
    parts = text.strip().split(",")
    if len(parts) != 3:
        raise ValueError(f"expected 'x,t,L|R', got {text!r}")
    return EdgeRef(check_vertex((int(parts[0]), int(parts[1]))), Side(parts[2]))


@dataclass(frozen=True)
class Window:
    """Closed box of lattice sites; anything outside is treated as absent."""

    x_min: int
    x_max: int
    t_min: int
    t_max: int

    def __post_init__(self):
        if self.x_min > self.x_max or self.t_min > self.t_max:
            raise ValueError(f"empty window {self}")
        if (self.x_min == self.x_max and self.t_min == self.t_max
                and (self.x_min + self.t_min) % 2):
            raise ValueError(f"window {self} holds no lattice site")

    @property
    def nx(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def nt(self) -> int:
        return self.t_max - self.t_min + 1

    def __contains__(self, v) -> bool:
        x, t = v
        return (self.x_min <= x <= self.x_max and self.t_min <= t <= self.t_max
                and (x + t) % 2 == 0)

    def contains_window(self, other: Window) -> bool:
        return (self.x_min <= other.x_min and other.x_max <= self.x_max
                and self.t_min <= other.t_min and other.t_max <= self.t_max)

    def vertices(self) -> Iterator[Vertex]:
        for t in range(self.t_min, self.t_max + 1):
            start = self.x_min + ((self.x_min + t) % 2)
            for x in range(start, self.x_max + 1, 2):
                yield Vertex(x, t)

    def edges(self) -> Iterator[EdgeRef]:
        """Edges with both endpoints inside, sorted by (t, x, side)."""
        for v in self.vertices():
            if v.t == self.t_max:
                continue
            for side in (Side.LEFT, Side.RIGHT):
                if self.x_min <= v.x + side.dx <= self.x_max:
                    yield EdgeRef(v, side)

    def index(self, v) -> tuple[int, int]:
        """Array index ``(row, col)`` of a site."""
        return v[1] - self.t_min, v[0] - self.x_min

    def grow(self, dx: int, dt_down: int = 0, dt_up: int = 0) -> Window:
        return Window(self.x_min - dx, self.x_max + dx,
                      self.t_min - dt_down, self.t_max + dt_up)

    def __str__(self):
        return f"{self.x_min} {self.x_max} {self.t_min} {self.t_max}"


def upper_children(v) -> tuple[Vertex, Vertex]:
    x, t = check_vertex(v)
    return Vertex(x - 1, t + 1), Vertex(x + 1, t + 1)


def lower_parents(v) -> tuple[Vertex, Vertex]:
    x, t = check_vertex(v)
    return Vertex(x - 1, t - 1), Vertex(x + 1, t - 1)


def cone(u, direction: Direction, depth: int) -> set[Vertex]:
    """Sites joined to ``u`` by an oriented path of length at most ``depth``."""
    return cone_of_set([u], direction, depth)


def cone_of_set(sites: Iterable, direction: Direction, depth: int) -> set[Vertex]:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    sites = [check_vertex(s) for s in sites]
    if len({s.t for s in sites}) > 1:
        raise ValueError("sites must lie on one horizontal line")
    out = set()
    sign = direction.value
    for x, t in sites:
        for k in range(depth + 1):
            for dx in range(-k, k + 1, 2):
                out.add(Vertex(x + dx, t + sign * k))
    return out


def cone_window(u, depth: int, direction: Direction = Direction.FORWARD) -> Window:
    """Smallest box holding ``cone(u, direction, depth)``."""
    x, t = check_vertex(u)
    if direction is Direction.FORWARD:
        return Window(x - depth, x + depth, t, t + depth)
    return Window(x - depth, x + depth, t - depth, t)
