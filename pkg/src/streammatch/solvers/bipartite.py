"""Maximum bipartite matching (Hopcroft-Karp) and the König vertex cover."""

from __future__ import annotations

from collections import deque

from ..graph import Graph, Matching, VertexCover, is_vertex_cover

__all__ = ["max_bipartite_matching", "min_vertex_cover_bipartite", "CertificateError"]

_INF = float("inf")


class CertificateError(RuntimeError):
    """A primal/dual pair failed its optimality certificate."""


def _left_adjacency(g: Graph) -> tuple[list[int], list[list[tuple[int, int]]]]:
    if g.bipartition is None:
        raise ValueError("graph has no bipartition")
    side = g.bipartition
    left = [v for v in range(g.n) if side[v] == 0]
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for idx, e in enumerate(g.edges):
        a, b = (e.u, e.v) if side[e.u] == 0 else (e.v, e.u)
        adj[a].append((b, idx))
    for a in left:
        # lowest neighbour first; parallel edges collapse onto the first occurrence
        seen = {}
        for b, idx in adj[a]:
            seen.setdefault(b, idx)
        adj[a] = sorted(seen.items())
    return left, adj


def max_bipartite_matching(g: Graph) -> Matching:
    """Maximum-cardinality matching, deterministic for a given edge order.

    Phases of BFS layering from free left vertices followed by
    vertex-disjoint shortest augmenting paths, scanned in index order.
    """
    left, adj = _left_adjacency(g)
    n = g.n
    mate = [-1] * n
    mate_edge = [-1] * n
    dist = [_INF] * n

    def bfs() -> bool:
        queue = deque()
        for a in left:
            if mate[a] == -1:
                dist[a] = 0
                queue.append(a)
            else:
                dist[a] = _INF
        found = False
        while queue:
            a = queue.popleft()
            for b, _ in adj[a]:
                nxt = mate[b]
                if nxt == -1:
                    found = True
                elif dist[nxt] == _INF:
                    dist[nxt] = dist[a] + 1
                    queue.append(nxt)
        return found

    def augment_from(root: int) -> bool:
        # iterative DFS along the BFS layers
        stack = [(root, 0)]
        path: list[tuple[int, int, int]] = []
        while stack:
            a, i = stack[-1]
            if i >= len(adj[a]):
                dist[a] = _INF
                stack.pop()
                if path:
                    path.pop()
                continue
            stack[-1] = (a, i + 1)
            b, idx = adj[a][i]
            nxt = mate[b]
            if nxt == -1:
                path.append((a, b, idx))
                for x, y, k in path:
                    mate[x], mate[y] = y, x
                    mate_edge[x] = mate_edge[y] = k
                return True
            if dist[nxt] == dist[a] + 1:
                path.append((a, b, idx))
                stack.append((nxt, 0))
        return False

    while bfs():
        for a in left:
            if mate[a] == -1:
                augment_from(a)

    edges = [g.edges[mate_edge[a]] for a in left if mate[a] != -1]
    return Matching.from_edges(edges, weighted=False)


def min_vertex_cover_bipartite(g: Graph, matching: Matching) -> VertexCover:
    """König cover from a maximum matching.

    Alternating reachability from unmatched left vertices: the cover is the
    unreached left side plus the reached right side.  Raises
    :class:`CertificateError` if the matching admits an augmenting path.
    """
    left, adj = _left_adjacency(g)
    mate = matching.mates(g.n)
    reached = [False] * g.n
    queue = deque(a for a in left if mate[a] == -1)
    for a in queue:
        reached[a] = True
    while queue:
        a = queue.popleft()
        for b, _ in adj[a]:
            if reached[b] or mate[a] == b:
                continue
            reached[b] = True
            nxt = mate[b]
            if nxt == -1:
                raise CertificateError(f"augmenting path ends at unmatched vertex {b}")
            if not reached[nxt]:
                reached[nxt] = True
                queue.append(nxt)
    side = g.bipartition
    members = frozenset(v for v in range(g.n) if (side[v] == 0) != reached[v])
    cover = VertexCover(members)
    if len(cover) != len(matching) or not is_vertex_cover(g, cover):
        raise CertificateError(f"König certificate failed: |U|={len(cover)} |M|={len(matching)}")
    return cover


def solve_bipartite(g: Graph) -> tuple[Matching, VertexCover]:
    m = max_bipartite_matching(g)
    return m, min_vertex_cover_bipartite(g, m)

