"""
How small can the sampling rate get?
====================================

The default rate carries slack from the analysis.  Shrinking its constant
stores fewer edges per round, up to the point where the potential stops
growing slowly and the result degrades.
"""

import logging

from streammatch import MbmConfig, run_mbm
from streammatch.stream import EdgeStream, planted_perfect_bipartite

logging.basicConfig(level=logging.ERROR)

g = planted_perfect_bipartite(256, 40, seed=2)
print(g)
print(" const  matched  peak edges  growth violations")
for c in (2.0, 1.0, 0.5, 0.25, 0.1):
    m, met = run_mbm(EdgeStream(g, order="seeded-shuffle-per-pass", seed=0),
                     MbmConfig(epsilon=0.5, seed=0, sample_constant=c))
    print(f"{c:6.2f}  {len(m):7d}  {met.peak_stored_edges:10d}  {met.growth_violations:17d}")
