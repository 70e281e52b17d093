"""Exhaustive oracles for small instances (test use)."""

from __future__ import annotations

from itertools import combinations

from ..graph import Graph

__all__ = ["brute_force_matching", "brute_force_vertex_cover", "InstanceTooLarge"]

MAX_ORACLE_EDGES = 24
MAX_ORACLE_VERTICES = 20


class InstanceTooLarge(ValueError):
    pass


def brute_force_matching(g: Graph, weighted: bool | None = None) -> int:
    """Exact maximum matching value by exhaustive search over edge subsets.

    Weighted unless every edge has weight 1 (or ``weighted`` says otherwise).
    Branches on the lowest-indexed remaining edge: take it or drop it.
    """
    if g.m > MAX_ORACLE_EDGES:
        raise InstanceTooLarge(f"brute force limited to {MAX_ORACLE_EDGES} edges, got {g.m}")
    if weighted is None:
        weighted = any(e.weight != 1 for e in g.edges)
    items = [(e.u, e.v, e.weight if weighted else 1) for e in g.edges]
    # suffix sums bound what the remaining edges can still add
    suffix = [0] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][2]
    best = 0

    def search(i: int, used: int, value: int) -> None:
        nonlocal best
        if value > best:
            best = value
        if i == len(items) or value + suffix[i] <= best:
            return
        u, v, w = items[i]
        if not (used >> u) & 1 and not (used >> v) & 1:
            search(i + 1, used | (1 << u) | (1 << v), value + w)
        search(i + 1, used, value)

    search(0, 0, 0)
    return best


def brute_force_vertex_cover(g: Graph) -> int:
    """Exact minimum vertex-cover size by enumerating subsets in size order."""
    if g.n > MAX_ORACLE_VERTICES:
        raise InstanceTooLarge(f"brute force limited to {MAX_ORACLE_VERTICES} vertices, got {g.n}")
    masks = {(1 << e.u) | (1 << e.v) for e in g.edges}
    if not masks:
        return 0
    for size in range(1, g.n + 1):
        for chosen in combinations(range(g.n), size):
            cover = 0
            for v in chosen:
                cover |= 1 << v
            if all(cover & m for m in masks):
                return size
    return g.n
