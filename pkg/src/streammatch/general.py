"""Streaming (1-eps)-approximate maximum weight matching in general graphs.

The user-facing ``epsilon`` is split: the driver runs everything (weight
preprocessing, round count, sampling rate, growth monitor) with
``eps / 4``, so the loss from dropping light edges and flooring the
rescaled weights stays within the advertised guarantee.

Preprocessing takes one pass for the heaviest weight ``w_max``.  Edges
lighter than ``(eps/n) * w_max`` are ignored and the rest rescaled to
``w' = w // t`` with ``t = max(1, floor(eps * w_max / n))``; both happen
on the fly in every later pass.  The first round's potential equals the
rescaled total weight ``W``, which fixes the round count
``ceil(4 log2 W / (eps log2(1 + eta)))`` and the sampling coefficient
``eta * 8 n ln(n W) / eps``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._driver import RoundHook, Solved, run_rounds, sample_graph
from .bipartite import ConfigError, _check_common
from .graph import Edge, Matching, cover_value
from .metrics import RunMetrics
from .sampler import CoverHistory, Potential
from .solvers import max_weight_matching_with_duals
from .stream import EdgeBlock, EdgeStream

__all__ = [
    "MwmConfig",
    "PreprocessResult",
    "preprocess_weights",
    "run_mwm",
    "mwm_rounds",
    "EPSILON_SPLIT",
]

EPSILON_SPLIT = 4


@dataclass(frozen=True)
class MwmConfig:
    epsilon: float
    seed: int = 0
    eta: int = 1
    rounds_override: Optional[int] = None
    preprocess: bool = True
    sample_constant: float = 8.0  # rate = sample_constant * n * ln(nW) * eta / eps

    def __post_init__(self):
        _check_common(self.epsilon, self.eta, self.rounds_override)
        if self.sample_constant < 0:
            raise ConfigError("sample_constant must be nonnegative")

    @property
    def internal_epsilon(self) -> float:
        return self.epsilon / EPSILON_SPLIT


@dataclass(frozen=True)
class PreprocessResult:
    w_max: int
    threshold: int  # smallest weight that survives
    scale: int  # t: retained weights become w // t
    kept_edges: Optional[int] = None
    W: Optional[int] = None

    def keep_mask(self, w: np.ndarray) -> np.ndarray:
        return w >= self.threshold

    def transform(self, block: EdgeBlock) -> EdgeBlock:
        """Drop light edges and rescale the rest; ``w_orig`` is carried along."""
        keep = self.keep_mask(block.w_orig)
        if keep.all() and self.scale == 1:
            return block
        return EdgeBlock(block.ordinal[keep], block.u[keep], block.v[keep],
                         block.w_orig[keep] // self.scale, block.w_orig[keep])


def _rule(w_max: int, epsilon: float, n: int) -> tuple[int, int]:
    """(threshold, scale) for the drop-and-rescale rule, in exact arithmetic."""
    if w_max <= 0:
        return 1, 1
    eps = Fraction(epsilon)
    cut = eps * w_max / max(n, 1)
    threshold = max(1, math.ceil(cut))
    scale = max(1, math.floor(cut))
    return threshold, scale


def _max_weight_pass(stream: EdgeStream) -> tuple[int, int]:
    """(w_max, number of edges) in one pass."""
    w_max = seen = 0
    for block in stream.blocks():
        if len(block):
            w_max = max(w_max, int(block.w_orig.max()))
            seen += len(block)
    return w_max, seen


def preprocess_weights(stream: EdgeStream, epsilon: float, count: bool = True) -> PreprocessResult:
    """Find ``w_max`` in one pass and derive the drop/rescale rule.

    With ``count=True`` a second pass fills in ``kept_edges`` and ``W``.
    The streaming driver uses ``count=False`` and reads both off its first
    potential pass instead, so preprocessing costs it a single pass.
    """
    w_max, _ = _max_weight_pass(stream)
    threshold, scale = _rule(w_max, epsilon, stream.n)
    res = PreprocessResult(w_max, threshold, scale)
    if not count:
        return res
    kept = total = 0
    for block in stream.blocks():
        tb = res.transform(block)
        kept += len(tb)
        total += int(tb.w.sum())
    return PreprocessResult(w_max, threshold, scale, kept, total)


def mwm_rounds(W: int, epsilon: float, eta: int = 1) -> int:
    """``ceil(4 log2 W / (eps * max(1, log2(1+eta))))`` with eps the *internal* epsilon."""
    if W <= 0:
        return 0
    return max(1, math.ceil(4 * math.log2(W) / (epsilon * max(1.0, math.log2(1 + eta)))))


def sampling_rate(n: int, W: int, epsilon: float, eta: int = 1, constant: float = 8.0) -> float:
    return eta * constant * n * math.log(n * W) / epsilon


def run_mwm(
    stream: EdgeStream,
    cfg: MwmConfig,
    on_round: Optional[RoundHook] = None,
) -> tuple[Matching, RunMetrics]:
    started = time.perf_counter()
    passes_before = stream.pass_counter
    eps = cfg.internal_epsilon
    n = stream.n
    metrics = RunMetrics("mwm", cfg.epsilon, cfg.eta, cfg.seed, n=n)

    def finish(matching: Matching) -> tuple[Matching, RunMetrics]:
        metrics.passes_used = stream.pass_counter - passes_before
        metrics.wall_time_ms = int((time.perf_counter() - started) * 1000)
        return matching, metrics

    if stream.m == 0 or cfg.rounds_override == 0:
        return finish(Matching())

    metrics.m = stream.m or 0
    if cfg.preprocess:
        w_max, seen = _max_weight_pass(stream)
        metrics.m = seen
        metrics.preprocessing_passes = 1
        if w_max == 0:
            return finish(Matching())
        pre = PreprocessResult(w_max, *_rule(w_max, eps, n))
    else:
        pre = PreprocessResult(w_max=0, threshold=1, scale=1)

    def plan(pot: Potential) -> tuple[int, float]:
        W = pot.Q
        if not metrics.m:
            metrics.m = pot.edges
        metrics.preprocess = {
            "w_max": pre.w_max, "threshold": pre.threshold, "scale": pre.scale,
            "kept_edges": pot.edges, "W": W,
        }
        if W == 0:
            return 0, 0.0
        rounds = cfg.rounds_override if cfg.rounds_override is not None else mwm_rounds(W, eps, cfg.eta)
        return rounds, sampling_rate(n, W, eps, cfg.eta, cfg.sample_constant)

    def solve(sample: EdgeBlock) -> Solved:
        g = sample_graph(n, sample)  # rescaled weights
        matching, duals = max_weight_matching_with_duals(g)  # certified against g
        index = {id(e): i for i, e in enumerate(g.edges)}
        original = [Edge(e.u, e.v, int(sample.w_orig[index[id(e)]])) for e in matching.edges]
        out = Matching.from_edges(original, weighted=True)
        return Solved(out, duals, out.value, cover_value(duals))

    best = run_rounds(
        stream,
        history=CoverHistory("general", n),
        plan=plan,
        base=1 + cfg.eta,
        seed=cfg.seed,
        epsilon=eps,
        solve=solve,
        metrics=metrics,
        transform=pre.transform if cfg.preprocess else None,
        on_round=on_round,
        edge_count=stream.m or 0,
    )
    return finish(best)
