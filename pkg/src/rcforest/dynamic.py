"""The user-facing handle: a bounded-degree forest with its RC-Tree."""
from .contraction import (
    ContractionRecord,
    build_static,
    build_static_phased,
    degree_of,
    neighbors,
)
from .errors import DeadVertex
from .forest import BatchEdit, ForestConfig, ValidatedEdit, edge_id, validate_batch
from . import queries, rc_tree
from .rc_tree import PathSubtreeAlgebra, _check_vertex, ancestors, reaggregate
from .update import batch_update

EXECUTORS = ("basic", "phased")


class DynamicForest:
    """A forest on vertices ``0..n-1`` with degree at most ``t``.

    Edges change only through :meth:`update` (or :meth:`insert` /
    :meth:`delete`), which validates the whole batch before touching
    anything.  Queries read the RC-Tree and are safe to run concurrently
    between updates.
    """

    def __init__(self, n, t=3, *, algebra=None, vertex_weights=None, threads=1, debug=False):
        ForestConfig(n, t)
        self.n, self.t = n, t
        self.algebra = algebra if algebra is not None else PathSubtreeAlgebra()
        self.vertex_weights = list(vertex_weights) if vertex_weights is not None else [0] * n
        if len(self.vertex_weights) != n:
            raise ValueError(f"expected {n} vertex weights, got {len(self.vertex_weights)}")
        self.threads = threads
        self.debug = debug
        self.edges = {}
        self.record = build_static(self)

    @classmethod
    def from_edges(cls, n, edges, t=3, *, executor="basic", **kwargs):
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples, validating them as one batch."""
        forest = cls(n, t, **kwargs)
        edit = validate_batch(forest, BatchEdit.build(insert=edges))
        forest.edges = dict(edit.insertions)
        forest.build(executor)
        return forest

    @classmethod
    def from_config(cls, config: ForestConfig, **kwargs):
        return cls(config.n, config.t, **kwargs)

    def build(self, executor="basic", *, fault=None):
        """Recontract the current edge set from scratch."""
        if executor == "basic":
            self.record = build_static(self, threads=self.threads, debug=self.debug, fault=fault)
        elif executor == "phased":
            self.record = build_static_phased(self, threads=self.threads, debug=self.debug)
        else:
            raise ValueError(f"unknown executor {executor!r}")
        return self.record

    # -- edits --------------------------------------------------------------
    def validate(self, edit: BatchEdit) -> ValidatedEdit:
        return validate_batch(self, edit)

    def update(self, edit, *, executor="basic", fault=None):
        """Apply a batch; returns :class:`~rcforest.update.UpdateStats`."""
        if isinstance(edit, BatchEdit):
            edit = self.validate(edit)
        return batch_update(self, edit, executor=executor, threads=self.threads,
                            debug=self.debug, fault=fault)

    def insert(self, edges, **kwargs):
        return self.update(BatchEdit.build(insert=edges), **kwargs)

    def delete(self, edges, **kwargs):
        return self.update(BatchEdit.build(delete=edges), **kwargs)

    def _after_update(self, edit: ValidatedEdit):
        for e in edit.deletions:
            del self.edges[e]
        self.edges.update(edit.insertions)

    def set_edge_weight(self, u, v, w):
        e = edge_id(u, v, self.n)
        if e not in self.edges:
            from .errors import MissingEdge
            raise MissingEdge(e)
        self.edges[e] = w
        self.record.value[e] = self.algebra.edge_value(e, w)
        reaggregate(self.record, {e})

    def set_vertex_weight(self, v, w):
        _check_vertex(self.record, v)
        self.vertex_weights[v] = w
        self.record.vertex_weights[v] = w
        reaggregate(self.record, {v})

    # -- structure ----------------------------------------------------------
    def degree(self, v, round_=0):
        """Number of edge-bearing slots of ``v`` at ``round_`` (unary slots excluded)."""
        _check_vertex(self.record, v)
        if not self.record.is_live(v, round_):
            raise DeadVertex(v, round_)
        return degree_of(self.record.adj[v][round_])

    def neighbors(self, v):
        _check_vertex(self.record, v)
        return neighbors(self.record.adj[v][0])

    def root_of(self, v):
        return rc_tree.root_of(self.record, v)

    def ancestors(self, v):
        _check_vertex(self.record, v)
        return ancestors(self.record, v)

    @property
    def rounds(self):
        return self.record.rounds

    @property
    def m(self):
        return len(self.edges)

    def edge_list(self):
        return [(u, v, w) for (u, v), w in sorted(self.edges.items())]

    def serialize(self) -> bytes:
        return self.record.serialize() + rc_tree.serialize_rc(self.record)

    # -- queries ------------------------------------------------------------
    def connected(self, u, v):
        return queries.connected(self.record, u, v)

    def subtree_sum(self, r, c):
        return queries.subtree_sum(self.record, r, c)

    def path_sum(self, u, v):
        return queries.path_sum(self.record, u, v)

    def path_max_edge(self, u, v):
        return queries.path_extreme_edge(self.record, u, v, "max")

    def path_min_edge(self, u, v):
        return queries.path_extreme_edge(self.record, u, v, "min")

    def lca(self, r, u, v):
        return queries.lca(self.record, r, u, v)

    def batch_query(self, reqs):
        return queries.batch_query(self.record, reqs, self.threads)


def new_forest(config: ForestConfig, **kwargs) -> DynamicForest:
    """Edgeless forest: ``n`` isolated vertices, each its own root cluster."""
    return DynamicForest.from_config(config, **kwargs)


__all__ = ["DynamicForest", "new_forest", "ContractionRecord", "EXECUTORS"]
