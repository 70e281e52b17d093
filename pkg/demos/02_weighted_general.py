"""
Weighted matching in a general graph
====================================

Weights are bucketed into a small range first, then the same
sample-solve-reweight loop runs with blossom duals as the covers.
"""

import logging

from streammatch import MwmConfig, max_weight_matching_with_duals, run_mwm
from streammatch.stream import EdgeStream, random_general_weighted

logging.basicConfig(level=logging.ERROR)

g = random_general_weighted(200, 10, 100, seed=3)
best, duals = max_weight_matching_with_duals(g)
print(g, "optimum weight:", best.value, "dual value (doubled):", duals.value())

for eta in (1, 16):
    m, met = run_mwm(EdgeStream(g, seed=eta), MwmConfig(epsilon=0.25, seed=0, eta=eta))
    print(f"eta={eta:2d}: weight {m.value} ({m.value / best.value:.3f} of optimum), "
          f"{met.rounds} rounds, {met.passes_used} passes")

# A larger accuracy parameter lets preprocessing merge weights more coarsely.
heavy = random_general_weighted(200, 10, 1_000_000, seed=3)
m, met = run_mwm(EdgeStream(heavy), MwmConfig(epsilon=0.6))
print("w_max 1e6 preprocessing:", met.preprocess)
