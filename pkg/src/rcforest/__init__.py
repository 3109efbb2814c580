"""Deterministic batch-dynamic rake-compress trees."""
from .chain_mis import ChainGraph, chain_mis, color_chains
from .contraction import ContractionRecord, build_static, build_static_phased
from .dynamic import DynamicForest, new_forest
from .errors import (
    CycleError,
    DeadVertex,
    DegreeOverflow,
    DuplicateEdge,
    ForestError,
    InvalidVertex,
    InvariantError,
    MissingEdge,
    NotAdjacent,
    NotConnected,
    NotIndependent,
    NotMaximal,
    QueryError,
    SameVertex,
    ValidationError,
)
from .forest import BatchEdit, ForestConfig, ValidatedEdit, edge_id, validate_batch
from .queries import QueryRequest
from .rc_tree import ClusterAlgebra, PathSubtreeAlgebra, SizeAlgebra
from .update import UpdateStats, batch_update

__all__ = [
    "BatchEdit", "ChainGraph", "ClusterAlgebra", "ContractionRecord", "CycleError",
    "DeadVertex", "DegreeOverflow", "DuplicateEdge", "DynamicForest", "ForestConfig",
    "ForestError", "InvalidVertex", "InvariantError", "MissingEdge", "NotAdjacent",
    "NotConnected", "NotIndependent", "NotMaximal", "PathSubtreeAlgebra", "QueryError",
    "QueryRequest", "SameVertex", "SizeAlgebra", "UpdateStats", "ValidatedEdit",
    "ValidationError", "batch_update", "build_static", "build_static_phased", "chain_mis",
    "color_chains", "edge_id", "new_forest", "validate_batch",
]
