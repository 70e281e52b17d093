"""Implicit edge importances, the potential pass and the sampling pass.

No per-edge state survives between passes.  An edge's importance in round
``r`` is ``base ** c`` where ``c`` counts the earlier rounds whose stored
cover missed the edge; ``c`` is recomputed from :class:`CoverHistory`
every time the edge streams past.  ``base`` is 2 for the plain algorithms
and ``1 + eta`` for the oversampled variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .graph import Edge, OddSetCover, VertexCover
from .stream import EdgeBlock, EdgeStream

__all__ = [
    "CoverHistory",
    "Potential",
    "importance_exponent",
    "potential_pass",
    "sample_pass",
    "sample_pass_block",
    "uniform_draws",
]

BlockTransform = Callable[[EdgeBlock], EdgeBlock]

_M64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _mix64(x: np.ndarray) -> np.ndarray:
    # splitmix64 finaliser
    x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return x ^ (x >> np.uint64(31))


def uniform_draws(seed: int, round_: int, ordinal: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) draws keyed on ``(seed, round, ordinal)``.

    A keyed hash rather than a sequential generator, so the draw for an
    edge does not depend on where it sits in the pass.  53 bits of each
    64-bit word are used, the full precision of a double.
    """
    with np.errstate(over="ignore"):
        k = _mix64(np.array([seed & _M64], dtype=np.uint64))
        k = _mix64(k ^ (np.uint64(round_ & _M64) * _GOLDEN))
        x = _mix64(k + np.asarray(ordinal, dtype=np.uint64) * _GOLDEN)
    return (x >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


class CoverHistory:
    """Per-round covers, append-only.

    Bipartite rounds are bit-rows over the vertices, general rounds are
    :class:`OddSetCover` objects.  Consecutive identical covers share one
    stored entry with a repeat count, which changes nothing about the
    reconstructed exponents.
    """

    def __init__(self, mode: str, n: int):
        if mode not in ("bipartite", "general"):
            raise ValueError("mode must be 'bipartite' or 'general'")
        self.mode = mode
        self.n = n
        self._runs: list[list] = []  # [cover, repeat]
        self._rounds = 0

    def __len__(self) -> int:
        return self._rounds

    @property
    def distinct(self) -> int:
        return len(self._runs)

    @property
    def rounds(self) -> list:
        out = []
        for cover, count in self._runs:
            out.extend([cover] * count)
        return out

    def append(self, cover: Union[VertexCover, np.ndarray, OddSetCover]) -> None:
        if self.mode == "bipartite":
            if isinstance(cover, VertexCover):
                cover = cover.bit_row(self.n)
            cover = np.asarray(cover, dtype=bool)
            if cover.shape != (self.n,):
                raise ValueError(f"bit-row must have length {self.n}")
            cover.setflags(write=False)
            same = bool(self._runs) and np.array_equal(self._runs[-1][0], cover)
        else:
            if not isinstance(cover, OddSetCover):
                raise TypeError("general history stores OddSetCover rounds")
            if cover.n != self.n:
                raise ValueError(f"cover has {cover.n} vertex duals, expected {self.n}")
            last = self._runs[-1][0] if self._runs else None
            same = last is not None and (last is cover or last == cover)
        if same:
            self._runs[-1][1] += 1
        else:
            self._runs.append([cover, 1])
        self._rounds += 1

    def exponents(self, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        """``c(e, r)`` for a block of edges, r being the next round."""
        c = np.zeros(len(u), dtype=np.int64)
        for cover, count in self._runs:
            if self.mode == "bipartite":
                missed = ~(cover[u] | cover[v])
            else:
                missed = ~cover.covered_mask(u, v, w)
            c += count * missed
        return c

    def stored_bits(self) -> int:
        """Rough space estimate of the stored history."""
        if self.mode == "bipartite":
            return self._rounds * self.n
        bits = 0
        for cover, count in self._runs:
            word = max(1, max(cover.y, default=0).bit_length(), max(cover.z, default=0).bit_length())
            sets = sum(len(s) for s in cover.laminar.sets)
            bits += count * (self.n * word + len(cover.z) * word + sets * max(1, self.n.bit_length()))
        return bits


def importance_exponent(e: Edge, h: CoverHistory) -> int:
    c = h.exponents(np.array([e.u]), np.array([e.v]), np.array([e.weight]))
    return int(c[0])


@dataclass(frozen=True)
class Potential:
    Q: int
    edges: int = 0  # edges seen by the pass (after any transform)

    @property
    def log2(self) -> float:
        return math.log2(self.Q) if self.Q > 0 else float("-inf")


def _weights_for_mass(h: CoverHistory, block: EdgeBlock) -> np.ndarray:
    if h.mode == "bipartite":
        return np.ones(len(block), dtype=np.int64)
    return block.w


def _blocks(stream: EdgeStream, transform: Optional[BlockTransform]):
    for block in stream.blocks():
        yield transform(block) if transform is not None else block


def potential_pass(
    stream: EdgeStream,
    h: CoverHistory,
    base: int = 2,
    transform: Optional[BlockTransform] = None,
) -> Potential:
    """One pass computing ``Q = sum(mass_e)`` exactly.

    ``mass_e`` is ``base ** c`` (bipartite) or ``w(e) * base ** c`` (general).
    """
    per_exponent = np.zeros(len(h) + 1, dtype=np.int64)
    seen = 0
    for block in _blocks(stream, transform):
        c = h.exponents(block.u, block.v, block.w)
        np.add.at(per_exponent, c, _weights_for_mass(h, block))
        seen += len(block)
    total = 0
    for k, s in enumerate(per_exponent.tolist()):
        if s:
            total += s * base**k
    return Potential(total, seen)


@dataclass
class SampleResult:
    edges: EdgeBlock
    expected_size: float


def _as_float(rate) -> float:
    return float(Fraction(rate)) if not isinstance(rate, float) else rate


def sample_pass_block(
    stream: EdgeStream,
    h: CoverHistory,
    Q: Potential | int,
    rate,
    seed: int,
    round_: int,
    base: int = 2,
    transform: Optional[BlockTransform] = None,
) -> SampleResult:
    """One pass keeping each edge with probability ``min(1, rate * mass_e / Q)``."""
    q = Q.Q if isinstance(Q, Potential) else int(Q)
    rate_f = _as_float(rate)
    kept = []
    expected = 0.0
    ratio_cache: dict[int, float] = {}
    for block in _blocks(stream, transform):
        if not len(block):
            continue
        if q <= 0 or rate_f <= 0:
            continue
        c = h.exponents(block.u, block.v, block.w)
        # base**c / Q as a correctly rounded double, one division per distinct exponent
        uniq, inv = np.unique(c, return_inverse=True)
        ratios = np.empty(len(uniq))
        for i, k in enumerate(uniq.tolist()):
            r = ratio_cache.get(k)
            if r is None:
                r = ratio_cache[k] = base**k / q
            ratios[i] = r
        p = np.minimum(1.0, rate_f * _weights_for_mass(h, block) * ratios[inv])
        expected += float(p.sum())
        keep = uniform_draws(seed, round_, block.ordinal) < p
        kept.append(EdgeBlock(*(a[keep] for a in block)))
    if kept:
        edges = EdgeBlock(*(np.concatenate(parts) for parts in zip(*kept)))
        order = np.argsort(edges.ordinal, kind="stable")
        edges = EdgeBlock(*(a[order] for a in edges))
    else:
        empty = np.zeros(0, dtype=np.int64)
        edges = EdgeBlock(empty, empty, empty, empty, empty)
    return SampleResult(edges, expected)


def sample_pass(
    stream: EdgeStream,
    h: CoverHistory,
    Q: Potential | int,
    rate,
    seed: int,
    round_: int,
    base: int = 2,
    transform: Optional[BlockTransform] = None,
) -> list[Edge]:
    res = sample_pass_block(stream, h, Q, rate, seed, round_, base, transform)
    b = res.edges
    return [Edge(u, v, w) for u, v, w in zip(b.u.tolist(), b.v.tolist(), b.w.tolist())]
