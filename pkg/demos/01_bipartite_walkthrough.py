"""
Approximate bipartite matching in a few dozen passes
=====================================================

A planted perfect matching hidden among random noise edges, solved while
only ever holding a sample of the edges in memory.
"""

import logging

from streammatch import MbmConfig, max_bipartite_matching, run_mbm
from streammatch.stream import EdgeStream, planted_perfect_bipartite

logging.basicConfig(level=logging.ERROR)

# 300 left and 300 right vertices, a hidden perfect matching plus 40 noise edges per vertex
g = planted_perfect_bipartite(300, 40, seed=5)
print(g, "maximum matching:", len(max_bipartite_matching(g)))

# With eps = 0.5 the sampling rate 2n/eps = 2400 is well below m, so each round
# really works on a sample.
stream = EdgeStream(g, order="seeded-shuffle-per-pass", seed=1)
matching, metrics = run_mbm(stream, MbmConfig(epsilon=0.5, seed=1))

print("matched", len(matching), "after", metrics.rounds, "rounds /", metrics.passes_used, "passes")
print("largest sample held:", metrics.peak_stored_edges, "of", g.m, "edges")

# The potential grows by at most a factor 1 + eps/2 per round.
for rec in metrics.per_round[:8]:
    print(f"round {rec.round:3d}  log2 Q = {rec.Q.bit_length() - 1:3d}  sample {rec.sample_size:5d}"
          f"  matched {rec.solution_value}")
print("growth violations:", metrics.growth_violations)
