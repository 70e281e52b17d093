"""Exact in-memory solvers run on each round's sample, plus brute-force oracles."""

from .bipartite import CertificateError, max_bipartite_matching, min_vertex_cover_bipartite, solve_bipartite
from .blossom import certify_odd_set_cover, max_weight_matching_with_duals
from .oracle import InstanceTooLarge, brute_force_matching, brute_force_vertex_cover

__all__ = [
    "CertificateError",
    "InstanceTooLarge",
    "max_bipartite_matching",
    "min_vertex_cover_bipartite",
    "solve_bipartite",
    "max_weight_matching_with_duals",
    "certify_odd_set_cover",
    "brute_force_matching",
    "brute_force_vertex_cover",
]
