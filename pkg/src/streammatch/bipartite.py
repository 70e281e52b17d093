"""Streaming (1-eps)-approximate maximum bipartite matching.

Each round makes two passes: one for the potential ``Q`` and one that
samples every edge with probability ``min(1, rate * q_e / Q)``, where
``rate = 2 n eta / eps``.  The sample is solved exactly, its König cover is
recorded, and every edge the cover misses has its importance multiplied
by ``1 + eta`` (doubling for the default ``eta = 1``).  After
``ceil(4 log2(m) / (eps log2(1 + eta)))`` rounds the largest sampled
matching is returned.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from ._driver import RoundHook, Solved, run_rounds, sample_graph
from .graph import Matching
from .metrics import RunMetrics
from .sampler import CoverHistory
from .solvers import max_bipartite_matching, min_vertex_cover_bipartite
from .stream import EdgeBlock, EdgeStream

__all__ = ["MbmConfig", "ConfigError", "run_mbm", "mbm_rounds"]


class ConfigError(ValueError):
    pass


def _check_common(epsilon: float, eta, rounds_override: Optional[int]) -> None:
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    if isinstance(eta, bool) or not isinstance(eta, int) or eta < 1:
        raise ConfigError(f"eta must be an integer >= 1, got {eta!r}")
    if rounds_override is not None and rounds_override < 0:
        raise ConfigError("rounds_override must be nonnegative")


@dataclass(frozen=True)
class MbmConfig:
    epsilon: float
    seed: int = 0
    rounds_override: Optional[int] = None
    eta: int = 1
    sample_constant: float = 2.0  # rate = sample_constant * n * eta / eps

    def __post_init__(self):
        _check_common(self.epsilon, self.eta, self.rounds_override)
        if self.sample_constant < 0:
            raise ConfigError("sample_constant must be nonnegative")


def mbm_rounds(m: int, epsilon: float, eta: int = 1) -> int:
    """``ceil(4 log2 m / (eps log2(1+eta)))``, at least 1 for a nonempty graph."""
    if m <= 0:
        return 0
    return max(1, math.ceil(4 * math.log2(m) / (epsilon * max(1.0, math.log2(1 + eta)))))


def run_mbm(
    stream: EdgeStream,
    cfg: MbmConfig,
    on_round: Optional[RoundHook] = None,
) -> tuple[Matching, RunMetrics]:
    if not stream.is_bipartite:
        raise ValueError("run_mbm needs a stream with a declared bipartition")
    started = time.perf_counter()
    passes_before = stream.pass_counter
    metrics = RunMetrics("mbm", cfg.epsilon, cfg.eta, cfg.seed, n=stream.n)

    had_m = stream.m is not None
    m = stream.count_edges()
    metrics.m = m
    metrics.counting_passes = 0 if had_m else 1
    if m == 0:
        metrics.passes_used = stream.pass_counter - passes_before
        metrics.wall_time_ms = int((time.perf_counter() - started) * 1000)
        return Matching(), metrics

    rounds = cfg.rounds_override if cfg.rounds_override is not None else mbm_rounds(m, cfg.epsilon, cfg.eta)
    rate = cfg.sample_constant * stream.n * cfg.eta / cfg.epsilon
    n, side = stream.n, stream.bipartition
    if rounds == 0:
        metrics.passes_used = stream.pass_counter - passes_before
        return Matching(), metrics

    def solve(sample: EdgeBlock) -> Solved:
        g = sample_graph(n, sample, side)
        matching = max_bipartite_matching(g)
        cover = min_vertex_cover_bipartite(g, matching)  # raises unless |U| == |M|
        return Solved(matching, cover, len(matching), len(cover))

    best = run_rounds(
        stream,
        history=CoverHistory("bipartite", n),
        plan=lambda pot: (rounds, rate),
        base=1 + cfg.eta,
        seed=cfg.seed,
        epsilon=cfg.epsilon,
        solve=solve,
        metrics=metrics,
        on_round=on_round,
        edge_count=m,
    )
    metrics.passes_used = stream.pass_counter - passes_before
    metrics.wall_time_ms = int((time.perf_counter() - started) * 1000)
    return best, metrics
