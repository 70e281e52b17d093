"""Replayable edge streams with pass accounting.

Edge-list format (ASCII, whitespace separated, ``#`` lines ignored)::

    p <n> <m> [bip <n_left>]
    u v [w]
    ...

Vertex ids are 0-based, the weight defaults to 1.  ``m`` may be omitted
from the header (``p <n>`` or ``p <n> bip <n_left>``); consumers that need
it then pay one counting pass.

Streaming algorithms only see the input through :meth:`EdgeStream.blocks`
(or :func:`for_each_pass`), and every completed traversal bumps
``pass_counter`` by one.  Each edge carries its ordinal, its position in
the as-given order, so per-edge randomness can be keyed on edge identity
rather than on visit order.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Optional

import numpy as np

from .graph import Edge, Graph

__all__ = [
    "ORDER_MODES",
    "EdgeBlock",
    "EdgeStream",
    "StreamStats",
    "StreamFormatError",
    "SelfLoopError",
    "BipartitionError",
    "open_stream",
    "for_each_pass",
    "read_graph",
    "write_edge_list",
    "format_edge_list",
    "generate",
    "random_bipartite",
    "planted_perfect_bipartite",
    "random_general_weighted",
]

log = logging.getLogger(__name__)

ORDER_MODES = ("as-given", "seeded-shuffle-per-pass", "adversarial-fixed")


class StreamFormatError(ValueError):
    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


class SelfLoopError(StreamFormatError):
    pass


class BipartitionError(StreamFormatError):
    pass


class EdgeBlock(NamedTuple):
    """Edges of one chunk of a pass.  ``w`` is the weight the algorithm
    works with, ``w_orig`` the weight as read (they differ only after
    weight preprocessing)."""

    ordinal: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    w_orig: np.ndarray

    def __len__(self):
        return len(self.ordinal)


@dataclass
class StreamStats:
    passes_used: int = 0
    counting_passes: int = 0
    edges_per_pass: int = 0
    peak_stored_edges: int = 0
    peak_stored_bits_estimate: int = 0

    def note_stored(self, edges: int, bits: int = 0) -> None:
        self.peak_stored_edges = max(self.peak_stored_edges, edges)
        self.peak_stored_bits_estimate = max(self.peak_stored_bits_estimate, bits)


class _Header(NamedTuple):
    n: int
    m: Optional[int]
    n_left: Optional[int]
    lineno: int


def _parse_header(tokens: list[str], lineno: int) -> _Header:
    if not tokens or tokens[0] != "p":
        raise StreamFormatError("expected header 'p <n> <m> [bip <n_left>]'", lineno)
    rest = tokens[1:]
    try:
        n = int(rest[0])
        rest = rest[1:]
        m = None
        if rest and rest[0] != "bip":
            m = int(rest[0])
            rest = rest[1:]
        n_left = None
        if rest:
            if rest[0] != "bip" or len(rest) != 2:
                raise ValueError
            n_left = int(rest[1])
    except (IndexError, ValueError):
        raise StreamFormatError("malformed header", lineno) from None
    if n < 0 or (m is not None and m < 0):
        raise StreamFormatError("negative count in header", lineno)
    if n_left is not None and not 0 <= n_left <= n:
        raise StreamFormatError("bipartition size out of range", lineno)
    return _Header(n, m, n_left, lineno)


def _iter_file(path: str) -> Iterator[tuple[int, list[str]]]:
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            tokens = line.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            yield lineno, tokens


def _read_header(path: str) -> _Header:
    for lineno, tokens in _iter_file(path):
        return _parse_header(tokens, lineno)
    raise StreamFormatError("missing header", None)


def _parse_edges(path: str, header: _Header, block_size: int) -> Iterator[tuple[np.ndarray, ...]]:
    n, n_left = header.n, header.n_left
    buf_u: list[int] = []
    buf_v: list[int] = []
    buf_w: list[int] = []
    count = 0
    seen_header = False
    for lineno, tokens in _iter_file(path):
        if not seen_header:
            seen_header = True
            continue
        if len(tokens) not in (2, 3):
            raise StreamFormatError("expected 'u v [w]'", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
            w = int(tokens[2]) if len(tokens) == 3 else 1
        except ValueError:
            raise StreamFormatError("non-integer field", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise StreamFormatError(f"vertex out of range [0, {n})", lineno)
        if u == v:
            raise SelfLoopError(f"self-loop on vertex {u}", lineno)
        if w < 1:
            raise StreamFormatError("weight must be a positive integer", lineno)
        if n_left is not None and (u < n_left) == (v < n_left):
            raise BipartitionError(f"edge {u}-{v} does not cross the bipartition", lineno)
        buf_u.append(u)
        buf_v.append(v)
        buf_w.append(w)
        count += 1
        if len(buf_u) >= block_size:
            yield (np.array(buf_u, np.int64), np.array(buf_v, np.int64), np.array(buf_w, np.int64))
            buf_u, buf_v, buf_w = [], [], []
    if header.m is not None and count != header.m:
        raise StreamFormatError(f"header declares {header.m} edges, found {count}")
    if buf_u:
        yield (np.array(buf_u, np.int64), np.array(buf_v, np.int64), np.array(buf_w, np.int64))


class EdgeStream:
    """A replayable edge sequence over either a :class:`Graph` or a file.

    ``order`` selects the visit order of each pass:

    * ``as-given``: file / list order,
    * ``seeded-shuffle-per-pass``: a fresh permutation per pass, drawn from
      ``(seed, pass_index)``,
    * ``adversarial-fixed``: one permutation drawn from ``seed`` and reused
      for every pass.

    Shuffled modes buffer a whole pass to permute it.
    """

    def __init__(
        self,
        source: Graph | str | os.PathLike,
        *,
        order: str = "as-given",
        seed: int = 0,
        block_size: int = 1 << 16,
        validate: bool = True,
    ):
        if order not in ORDER_MODES:
            raise ValueError(f"unknown order mode {order!r}; expected one of {ORDER_MODES}")
        self.order = order
        self.seed = seed
        self.block_size = block_size
        self.pass_counter = 0
        self.stats = StreamStats()
        if isinstance(source, Graph):
            self._graph: Optional[Graph] = source
            self._path = None
            self.n = source.n
            self._m: Optional[int] = source.m
            self.bipartition = source.bipartition
        else:
            self._graph = None
            self._path = os.fspath(source)
            header = _read_header(self._path)
            self._header = header
            self.n = header.n
            self._m = header.m
            self.bipartition = (
                None if header.n_left is None
                else tuple([0] * header.n_left + [1] * (header.n - header.n_left))
            )
            if validate:
                # setup-time format check; not an algorithmic pass and its count is discarded
                for _ in _parse_edges(self._path, header, block_size):
                    pass

    @property
    def m(self) -> Optional[int]:
        """Edge count if known from the header (or after :meth:`count_edges`)."""
        return self._m

    @property
    def is_bipartite(self) -> bool:
        return self.bipartition is not None

    def count_edges(self) -> int:
        """Return m, paying one counting pass when the header lacked it."""
        if self._m is None:
            total = 0
            for block in self.blocks():
                total += len(block)
            self._m = total
            self.stats.counting_passes += 1
        return self._m

    def _raw(self) -> Iterator[tuple[np.ndarray, ...]]:
        if self._graph is not None:
            u, v, w = self._graph.arrays
            for lo in range(0, len(u), self.block_size):
                hi = lo + self.block_size
                yield u[lo:hi], v[lo:hi], w[lo:hi]
        else:
            yield from _parse_edges(self._path, self._header, self.block_size)

    def _permutation(self, size: int) -> Optional[np.ndarray]:
        if self.order == "as-given":
            return None
        if self.order == "adversarial-fixed":
            return np.random.default_rng([self.seed, 0]).permutation(size)
        return np.random.default_rng([self.seed, self.pass_counter]).permutation(size)

    def blocks(self) -> Iterator[EdgeBlock]:
        """One full traversal of the stream as ordinal-tagged array blocks.

        The pass counter moves only when the traversal runs to completion.
        """
        count = 0
        if self.order == "as-given":
            for u, v, w in self._raw():
                ordinal = np.arange(count, count + len(u), dtype=np.int64)
                count += len(u)
                yield EdgeBlock(ordinal, u, v, w, w)
        else:
            parts = list(self._raw())
            if parts:
                u = np.concatenate([p[0] for p in parts])
                v = np.concatenate([p[1] for p in parts])
                w = np.concatenate([p[2] for p in parts])
            else:
                u = v = w = np.zeros(0, dtype=np.int64)
            count = len(u)
            perm = self._permutation(count)
            ordinal = np.arange(count, dtype=np.int64)[perm]
            u, v, w = u[perm], v[perm], w[perm]
            for lo in range(0, count, self.block_size):
                sl = slice(lo, lo + self.block_size)
                yield EdgeBlock(ordinal[sl], u[sl], v[sl], w[sl], w[sl])
        self.pass_counter += 1
        self.stats.passes_used = self.pass_counter
        self.stats.edges_per_pass = count

    def for_each_pass(self, visitor: Callable[[Edge], object]) -> None:
        for block in self.blocks():
            for a, b, c in zip(block.u.tolist(), block.v.tolist(), block.w.tolist()):
                visitor(Edge(a, b, c))

    def __repr__(self):
        src = self._path if self._path is not None else repr(self._graph)
        return f"<EdgeStream {src} order={self.order} passes={self.pass_counter}>"


def open_stream(path: str | os.PathLike, *, order: str = "as-given", seed: int = 0) -> EdgeStream:
    return EdgeStream(path, order=order, seed=seed)


def for_each_pass(stream: EdgeStream, visitor: Callable[[Edge], object]) -> None:
    stream.for_each_pass(visitor)


def read_graph(path: str | os.PathLike) -> Graph:
    """Load a whole edge-list file into memory (offline use: oracles, verify)."""
    s = EdgeStream(path, validate=False)
    edges = []
    for block in s.blocks():
        edges.extend(zip(block.u.tolist(), block.v.tolist(), block.w.tolist()))
    return Graph(s.n, edges, s.bipartition)


def format_edge_list(g: Graph, weights: Optional[bool] = None) -> str:
    if weights is None:
        weights = any(e.weight != 1 for e in g.edges)
    header = f"p {g.n} {g.m}"
    if g.bipartition is not None:
        n_left = g.bipartition.count(0)
        if list(g.bipartition) != [0] * n_left + [1] * (g.n - n_left):
            raise ValueError("file format needs left vertices to precede right ones")
        header += f" bip {n_left}"
    lines = [header]
    for e in g.edges:
        lines.append(f"{e.u} {e.v} {e.weight}" if weights else f"{e.u} {e.v}")
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: str | os.PathLike, weights: Optional[bool] = None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_edge_list(g, weights))


# ---------------------------------------------------------------- generators

def _distinct_pairs(rng: np.random.Generator, count: int, universe: int) -> np.ndarray:
    """``count`` distinct integers from ``range(universe)``."""
    if count > universe:
        raise ValueError("not enough distinct pairs")
    return rng.choice(universe, size=count, replace=False)


def random_bipartite(n_side: int, avg_deg: float, seed: int) -> Graph:
    if n_side < 0 or avg_deg < 0:
        raise ValueError("n_side and avg_deg must be nonnegative")
    if n_side and avg_deg >= n_side:
        raise ValueError("avg_deg must be smaller than n_side")
    rng = np.random.default_rng(seed)
    m = int(round(n_side * avg_deg))
    codes = _distinct_pairs(rng, m, n_side * n_side)
    edges = [(int(c // n_side), n_side + int(c % n_side)) for c in codes]
    return Graph.bipartite(n_side, n_side, edges)


def planted_perfect_bipartite(n_side: int, noise_deg: int, seed: int) -> Graph:
    """A perfect matching on ``n_side + n_side`` vertices plus ``noise_deg``
    extra right neighbours per left vertex, shuffled together."""
    if n_side < 1:
        raise ValueError("n_side must be positive")
    if noise_deg < 0 or noise_deg >= n_side:
        raise ValueError("noise_deg must be in [0, n_side)")
    rng = np.random.default_rng(seed)
    plant = rng.permutation(n_side)
    edges = []
    for left in range(n_side):
        edges.append((left, n_side + int(plant[left])))
        if noise_deg:
            others = rng.choice(n_side - 1, size=noise_deg, replace=False)
            others = others + (others >= plant[left])  # skip the planted partner
            edges.extend((left, n_side + int(r)) for r in others)
    order = rng.permutation(len(edges))
    return Graph.bipartite(n_side, n_side, [edges[i] for i in order])


def random_general_weighted(n: int, avg_deg: float, w_max: int, seed: int) -> Graph:
    if n < 0 or avg_deg < 0:
        raise ValueError("n and avg_deg must be nonnegative")
    if w_max < 1:
        raise ValueError("w_max must be at least 1")
    if n and avg_deg >= n:
        raise ValueError("avg_deg must be smaller than n")
    rng = np.random.default_rng(seed)
    m = int(round(n * avg_deg / 2))
    codes = _distinct_pairs(rng, m, n * (n - 1) // 2) if m else np.zeros(0, dtype=np.int64)
    # decode the i-th pair (a < b) of the upper triangle
    edges = []
    for c in codes.tolist():
        a = (2 * n - 1 - math.isqrt((2 * n - 1) ** 2 - 8 * c)) // 2
        while a * (2 * n - a - 1) // 2 > c:
            a -= 1
        while (a + 1) * (2 * n - a - 2) // 2 <= c:
            a += 1
        b = c - a * (2 * n - a - 1) // 2 + a + 1
        edges.append((a, b, int(rng.integers(1, w_max + 1))))
    return Graph(n, edges)


_GENERATORS = {
    "random-bipartite": random_bipartite,
    "planted-perfect-bipartite": planted_perfect_bipartite,
    "random-general-weighted": random_general_weighted,
}


def generate(kind: str, *params, seed: int = 0) -> Graph:
    """``generate("planted-perfect-bipartite", 64, 8, seed=1)`` etc."""
    try:
        fn = _GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}; expected one of {sorted(_GENERATORS)}") from None
    return fn(*params, seed=seed)
