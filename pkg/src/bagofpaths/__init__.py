"""Bag-of-paths node distances on weighted directed graphs."""

from .distance import (
    DistanceMatrix,
    distance_limits_report,
    potential_distance,
    potential_to_target,
    surprisal_distance,
)
from .engine import (
    BopModel,
    ProbabilityMatrix,
    bounded_partition_check,
    build_model,
    hitting_column_direct,
    hitting_probabilities,
    regular_probabilities,
)
from .graph import Graph, build_graph, load_edge_list, reference_transitions
from .kernel import distance_to_kernel, top_eigenvectors

__all__ = [
    "BopModel",
    "DistanceMatrix",
    "Graph",
    "ProbabilityMatrix",
    "bounded_partition_check",
    "build_graph",
    "build_model",
    "distance_limits_report",
    "distance_to_kernel",
    "hitting_column_direct",
    "hitting_probabilities",
    "load_edge_list",
    "potential_distance",
    "potential_to_target",
    "reference_transitions",
    "regular_probabilities",
    "surprisal_distance",
    "top_eigenvectors",
]
