"""Graphs, matchings and the dual objects that certify them.

Everything here is immutable once built.  Odd-set covers carry a ``scale``
so that covers produced on doubled weights (where blossom duals are
integral) can be checked against the original integer weights without
leaving integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Edge",
    "Graph",
    "Matching",
    "VertexCover",
    "LaminarFamily",
    "OddSetCover",
    "validate_matching",
    "is_vertex_cover",
    "cover_value",
    "is_covered",
    "is_laminar",
]


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: int = 1

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"self-loop on vertex {self.u}")
        if self.weight < 1:
            raise ValueError(f"edge weight must be >= 1, got {self.weight}")

    @property
    def key(self) -> tuple[int, int]:
        """Endpoints in canonical (low, high) order."""
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


class Graph:
    """An undirected multigraph on vertices ``0 .. n-1``.

    ``bipartition``, when given, assigns side 0 (left) or 1 (right) to every
    vertex and every edge must cross it.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Edge | tuple] = (),
        bipartition: Optional[Sequence[int]] = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ValueError(f"edge {e.u}-{e.v} out of range for n={n}")
            es.append(e)
        side = None
        if bipartition is not None:
            side = tuple(int(s) for s in bipartition)
            if len(side) != n or any(s not in (0, 1) for s in side):
                raise ValueError("bipartition must give side 0 or 1 for each vertex")
            for e in es:
                if side[e.u] == side[e.v]:
                    raise ValueError(f"edge {e.u}-{e.v} does not cross the bipartition")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(es))
        object.__setattr__(self, "bipartition", side)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def bipartite(cls, n_left: int, n_right: int, edges: Iterable[Edge | tuple] = ()) -> "Graph":
        """Left vertices are ``0..n_left-1``, right ones follow."""
        return cls(n_left + n_right, edges, [0] * n_left + [1] * n_right)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    @property
    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(u, v, w)`` as int64 arrays, in edge order."""
        u = np.fromiter((e.u for e in self.edges), dtype=np.int64, count=self.m)
        v = np.fromiter((e.v for e in self.edges), dtype=np.int64, count=self.m)
        w = np.fromiter((e.weight for e in self.edges), dtype=np.int64, count=self.m)
        return u, v, w

    def __repr__(self):
        kind = "bipartite " if self.is_bipartite else ""
        return f"<{kind}Graph n={self.n} m={self.m}>"


@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...] = ()
    value: int = 0

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], weighted: bool = True) -> "Matching":
        es = tuple(edges)
        value = sum(e.weight for e in es) if weighted else len(es)
        return cls(es, value)

    def __len__(self):
        return len(self.edges)

    def mates(self, n: int) -> list[int]:
        mate = [-1] * n
        for e in self.edges:
            mate[e.u] = e.v
            mate[e.v] = e.u
        return mate


@dataclass(frozen=True)
class VertexCover:
    members: frozenset[int] = frozenset()

    def __len__(self):
        return len(self.members)

    def bit_row(self, n: int) -> np.ndarray:
        row = np.zeros(n, dtype=bool)
        if self.members:
            row[list(self.members)] = True
        return row


@dataclass(frozen=True)
class LaminarFamily:
    """Sets stored as sorted vertex tuples; ``parent[i]`` is the smallest
    strictly containing set, or ``None``."""

    sets: tuple[tuple[int, ...], ...] = ()
    parent: tuple[Optional[int], ...] = ()

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "LaminarFamily":
        ss = tuple(tuple(sorted(set(s))) for s in sets)
        if not is_laminar(ss):
            raise ValueError("family is not laminar")
        frozen = [frozenset(s) for s in ss]
        parent: list[Optional[int]] = []
        for i, s in enumerate(frozen):
            best = None
            for j, t in enumerate(frozen):
                if j != i and s < t and (best is None or len(t) < len(frozen[best])):
                    best = j
            parent.append(best)
        return cls(ss, tuple(parent))

    def __len__(self):
        return len(self.sets)


def is_laminar(sets: Sequence[Iterable[int]]) -> bool:
    fs = [frozenset(s) for s in sets]
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            a, b = fs[i], fs[j]
            if a & b and not (a <= b or b <= a):
                return False
    return True


@dataclass(frozen=True)
class OddSetCover:
    """Vertex duals ``y``, laminar odd sets with duals ``z``.

    Values are in units of ``1/scale``: an edge is covered when
    ``y_u + y_v + sum(z_S for S containing both) >= scale * w(e)``.
    Blossom duals come out with ``scale=2``.
    """

    y: tuple[int, ...]
    laminar: LaminarFamily = field(default_factory=LaminarFamily)
    z: tuple[int, ...] = ()
    scale: int = 1

    def __post_init__(self):
        if len(self.z) != len(self.laminar):
            raise ValueError("one z value per laminar set is required")
        if any(v < 0 for v in self.y):
            raise ValueError("vertex duals must be nonnegative")
        n = len(self.y)
        for s, zs in zip(self.laminar.sets, self.z):
            if len(s) < 3 or len(s) % 2 == 0:
                raise ValueError(f"odd set of size {len(s)} is not odd or is a singleton")
            if zs <= 0:
                raise ValueError("stored odd sets must have positive dual")
            if s[-1] >= n or s[0] < 0:
                raise ValueError("odd set refers to a vertex outside the cover")
        if len(self.laminar) > max(0, 2 * n - 1):
            raise ValueError("laminar family larger than 2n-1")

    @property
    def n(self) -> int:
        return len(self.y)

    @cached_property
    def _index(self):
        # per-set depth / parent / cumulative z from the root; sentinel root at index K
        k = len(self.laminar)
        parent = np.array([k if p is None else p for p in self.laminar.parent] + [k], dtype=np.int64)
        order = sorted(range(k), key=lambda i: -len(self.laminar.sets[i]))
        depth = np.zeros(k + 1, dtype=np.int64)
        cz = np.zeros(k + 1, dtype=np.int64)
        inner = np.full(self.n, k, dtype=np.int64)
        for i in order:
            depth[i] = depth[parent[i]] + 1
            cz[i] = cz[parent[i]] + self.z[i]
            inner[list(self.laminar.sets[i])] = i
        return inner, parent, depth, cz

    def shared_dual(self, u: int, v: int) -> int:
        """Sum of z over the stored sets that contain both u and v."""
        inner, parent, depth, cz = self._index
        a, b = int(inner[u]), int(inner[v])
        while a != b:
            if depth[a] >= depth[b]:
                a = int(parent[a])
            else:
                b = int(parent[b])
        return int(cz[a])

    def covered_mask(self, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Vectorised :func:`is_covered` over edge arrays."""
        inner, parent, depth, cz = self._index
        y = np.asarray(self.y, dtype=np.int64)
        a, b = inner[u], inner[v]
        while True:
            diff = a != b
            if not diff.any():
                break
            da, db = depth[a], depth[b]
            a = np.where(diff & (da >= db), parent[a], a)
            b = np.where(diff & (db >= da), parent[b], b)
        return y[u] + y[v] + cz[a] >= self.scale * np.asarray(w, dtype=np.int64)

    def value(self) -> int:
        return cover_value(self)


def validate_matching(g: Graph, m: Matching) -> bool:
    """True iff the edges are pairwise vertex-disjoint and each is an edge of ``g``."""
    available: dict[tuple[int, int, int], int] = {}
    for e in g.edges:
        k = (*e.key, e.weight)
        available[k] = available.get(k, 0) + 1
    seen: set[int] = set()
    for e in m.edges:
        if not (0 <= e.u < g.n and 0 <= e.v < g.n):
            return False
        if e.u in seen or e.v in seen:
            return False
        seen.update((e.u, e.v))
        k = (*e.key, e.weight)
        if not available.get(k):
            return False
        available[k] -= 1
    return True


def is_vertex_cover(g: Graph, cover: VertexCover) -> bool:
    members = cover.members
    return all(e.u in members or e.v in members for e in g.edges)


def cover_value(c: OddSetCover) -> int:
    """``sum(y) + sum((|S|-1)/2 * z_S)``, in the cover's own units."""
    return sum(c.y) + sum((len(s) - 1) // 2 * zs for s, zs in zip(c.laminar.sets, c.z))


def is_covered(e: Edge, c: OddSetCover) -> bool:
    return c.y[e.u] + c.y[e.v] + c.shared_dual(e.u, e.v) >= c.scale * e.weight
