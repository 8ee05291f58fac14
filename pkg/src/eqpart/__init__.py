"""Equitable partitions of arc sets and mixed edge sets into structured parts.

Also decomposes integer arc vectors into sums of b-branchings."""

from .bbranchings import (
    b_potential,
    build_indegree_targets,
    equitable_b_partition,
    is_b_branching,
    is_equitable_b_partition,
    repartition_two_bbranchings,
    tight_core,
)
from .branchings import (
    disjoint_branchings_with_roots,
    equitable_branching_partition,
    is_branching,
    repartition_two_branchings,
    roots,
)
from .errors import InvariantError, PreconditionError, SizeLimitError
from .graph import ARC, EDGE, Elem, MixedGraph, indegree_vector, source_components, strong_components
from .idp import IdpQuery, decompose, expand_multigraph, partition_into_k_bbranchings
from .instance import Instance, InstanceError
from .matching_forests import (
    MatchingForest,
    boundary,
    build_exchange_graph,
    equitable_mf_partition,
    find_swap_path,
    is_matching_forest,
    mf_potential,
    swap_along_path,
)

__all__ = [
    "ARC",
    "EDGE",
    "Elem",
    "IdpQuery",
    "Instance",
    "InstanceError",
    "InvariantError",
    "MatchingForest",
    "MixedGraph",
    "PreconditionError",
    "SizeLimitError",
    "b_potential",
    "boundary",
    "build_exchange_graph",
    "build_indegree_targets",
    "decompose",
    "disjoint_branchings_with_roots",
    "equitable_b_partition",
    "equitable_branching_partition",
    "equitable_mf_partition",
    "expand_multigraph",
    "find_swap_path",
    "indegree_vector",
    "is_b_branching",
    "is_branching",
    "is_equitable_b_partition",
    "is_matching_forest",
    "mf_potential",
    "partition_into_k_bbranchings",
    "repartition_two_bbranchings",
    "repartition_two_branchings",
    "roots",
    "source_components",
    "strong_components",
    "swap_along_path",
    "tight_core",
]
