"""Semi-streaming maximum matching by sampling and exact solving.

``run_mbm`` approximates the maximum bipartite matching and ``run_mwm`` the
maximum weight matching of a general graph, both reading the edges from an
:class:`EdgeStream` in a bounded number of passes and keeping only a sample
plus one dual cover per round in memory.
"""

from .bipartite import ConfigError, MbmConfig, mbm_rounds, run_mbm
from .general import MwmConfig, PreprocessResult, mwm_rounds, preprocess_weights, run_mwm
from .graph import (
    Edge,
    Graph,
    LaminarFamily,
    Matching,
    OddSetCover,
    VertexCover,
    cover_value,
    is_covered,
    is_laminar,
    is_vertex_cover,
    validate_matching,
)
from .metrics import RoundRecord, RunMetrics
from ._driver import RoundEvent
from .sampler import CoverHistory, Potential, importance_exponent, potential_pass, sample_pass
from .solvers import (
    CertificateError,
    brute_force_matching,
    brute_force_vertex_cover,
    max_bipartite_matching,
    max_weight_matching_with_duals,
    min_vertex_cover_bipartite,
)
from .stream import (
    EdgeStream,
    StreamFormatError,
    generate,
    open_stream,
    planted_perfect_bipartite,
    random_bipartite,
    random_general_weighted,
    read_graph,
    write_edge_list,
)

__version__ = "0.1.0"
