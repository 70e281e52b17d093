"""Round loop shared by the bipartite and the general driver."""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

import numpy as np

from .graph import Graph, Matching
from .metrics import RoundRecord, RunMetrics
from .sampler import BlockTransform, CoverHistory, Potential, potential_pass, sample_pass_block
from .stream import EdgeBlock, EdgeStream

log = logging.getLogger("streammatch")


class Solved(NamedTuple):
    matching: Matching  # in original weights
    cover: object  # what goes into the history
    solution_value: int
    cover_value: int


class RoundEvent(NamedTuple):
    """Handed to ``on_round`` after each round's cover is recorded."""

    round: int
    Q: int
    sample: EdgeBlock
    matching: Matching
    cover: object
    history: CoverHistory


SolveFn = Callable[[EdgeBlock], Solved]
RoundHook = Callable[[RoundEvent], None]


def growth_ok(q_next: int, q_prev: int, epsilon: float) -> bool:
    """Exact test of ``q_next <= (1 + epsilon/2) * q_prev``."""
    eps = Fraction(epsilon)
    return 2 * eps.denominator * q_next <= (2 * eps.denominator + eps.numerator) * q_prev


def run_rounds(
    stream: EdgeStream,
    *,
    history: CoverHistory,
    plan: Callable[[Potential], tuple[int, float]],
    base: int,
    seed: int,
    epsilon: float,
    solve: SolveFn,
    metrics: RunMetrics,
    transform: Optional[BlockTransform] = None,
    on_round: Optional[RoundHook] = None,
    edge_count: int = 0,
) -> Matching:
    """Run the potential/sample/solve/record loop; return the best matching.

    ``plan`` maps the first round's potential to ``(rounds, rate)``; the
    general driver needs it because its first potential equals the total
    (rescaled) weight W, which fixes both.

    Consecutive rounds that draw exactly the same sample reuse the previous
    solve; the solvers are deterministic, so this only saves time.
    """
    best = Matching()
    best_value = -1
    prev_q: Optional[int] = None
    prev_ordinals: Optional[np.ndarray] = None
    prev_solved: Optional[Solved] = None
    warned = False
    word = max(1, math.ceil(math.log2(max(2, stream.n))))

    rounds, rate = 0, 0.0
    r = 0
    while True:
        r += 1
        pot = potential_pass(stream, history, base, transform)
        q = pot.Q
        if r == 1:
            rounds, rate = plan(pot)
            metrics.rounds = rounds
        if r > rounds:
            break
        if prev_q is not None:
            last = metrics.per_round[-1]
            last.uncovered_mass = (q - prev_q) // (base - 1)
            last.growth_ok = growth_ok(q, prev_q, epsilon)
            if not last.growth_ok:
                level = logging.DEBUG if metrics.growth_violations > 1 else logging.WARNING
                log.log(level, "round %d: potential grew from %d to %d, beyond (1+eps/2)", r - 1, prev_q, q)

        res = sample_pass_block(stream, history, Potential(q), rate, seed, r, base, transform)
        sample = res.edges
        if not warned and edge_count and res.expected_size > edge_count / 2:
            log.warning(
                "expected sample size %.0f exceeds m/2 = %d: sampling degenerates to solving "
                "(most of) the whole graph each round", res.expected_size, edge_count // 2)
            warned = True

        if prev_solved is not None and np.array_equal(prev_ordinals, sample.ordinal):
            solved = prev_solved
        else:
            solved = solve(sample)
            prev_ordinals, prev_solved = sample.ordinal, solved
        history.append(solved.cover)

        metrics.per_round.append(RoundRecord(
            round=r,
            Q=q,
            sample_size=len(sample),
            expected_sample_size=res.expected_size,
            solution_value=solved.solution_value,
            cover_value=solved.cover_value,
        ))
        sample_bits = len(sample) * (2 * word + int(sample.w_orig.max(initial=1)).bit_length())
        stream.stats.note_stored(len(sample), history.stored_bits() + sample_bits)
        metrics.peak_stored_edges = max(metrics.peak_stored_edges, len(sample))
        metrics.peak_stored_bits_estimate = max(
            metrics.peak_stored_bits_estimate, history.stored_bits() + sample_bits)
        if solved.solution_value > best_value:
            best, best_value = solved.matching, solved.solution_value
            metrics.best_round = r
        prev_q = q
        if on_round is not None:
            on_round(RoundEvent(r, q, sample, solved.matching, solved.cover, history))
        if r == rounds:
            break

    metrics.best_value = max(best_value, 0)
    return best


def sample_graph(n: int, sample: EdgeBlock, bipartition=None) -> Graph:
    return Graph(n, zip(sample.u.tolist(), sample.v.tolist(), sample.w.tolist()), bipartition)
