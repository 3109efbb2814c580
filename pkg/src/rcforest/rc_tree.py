"""RC-Tree view over a :class:`~rcforest.contraction.ContractionRecord`.

Clusters are keyed by their representative vertex (composite clusters) or by
their EdgeId (base edge clusters).  Vertex base clusters are not materialised:
a vertex's value lives on the composite cluster it represents.

The values stored on clusters come from a :class:`ClusterAlgebra`.  The query
suite needs the shape produced by :class:`PathSubtreeAlgebra`; connectivity and
LCA only use the tree structure and work with any algebra.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .contraction import COMPRESS, FINALIZE, RAKE

BASE, UNARY, BINARY, ROOT = "base", "unary", "binary", "root"
_KIND = {FINALIZE: ROOT, RAKE: UNARY, COMPRESS: BINARY}


class ClusterAlgebra:
    """How augmented values are built and combined.

    ``path_children`` are the values of the edge/binary children in slot order,
    aligned with ``boundary``; ``unary_children`` are the values of the clusters
    previously raked into the representative.  Implementations must be pure.
    """

    def edge_value(self, edge, weight):
        raise NotImplementedError

    def vertex_value(self, vertex, weight):
        raise NotImplementedError

    def rake_combine(self, rep, rep_value, boundary, path_children, unary_children):
        raise NotImplementedError

    def compress_combine(self, rep, rep_value, boundary, path_children, unary_children):
        raise NotImplementedError

    def root_combine(self, rep, rep_value, unary_children):
        raise NotImplementedError


class PathAggregate(NamedTuple):
    """Aggregate of a path: weight sum and the min/max edges.

    ``min_key`` is ``(weight, edge)`` and ``max_key`` is ``(-weight, edge)``, so
    taking the smaller key picks the extreme weight and, on ties, the smallest
    EdgeId.  ``None`` means the path has no edges.
    """

    total: object
    min_key: Optional[tuple]
    max_key: Optional[tuple]

    def join(self, other, middle=0):
        return PathAggregate(
            self.total + middle + other.total,
            _smaller(self.min_key, other.min_key),
            _smaller(self.max_key, other.max_key),
        )


def _smaller(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a <= b else b


EMPTY_PATH = PathAggregate(0, None, None)


class ClusterValue(NamedTuple):
    total: object
    path: Optional[PathAggregate]


class PathSubtreeAlgebra(ClusterAlgebra):
    """Sums over subtrees, and sum/min/max over boundary-to-boundary paths.

    ``total`` sums every edge weight and every vertex weight inside the
    cluster (boundary vertices excluded).  ``path`` covers the edges of the
    cluster path and the weights of its interior vertices.  With
    ``include_endpoints`` the path-sum query also adds the two endpoint weights.
    """

    def __init__(self, include_endpoints=False):
        self.include_endpoints = include_endpoints

    def __repr__(self):
        return f"PathSubtreeAlgebra(include_endpoints={self.include_endpoints})"

    def edge_value(self, edge, weight):
        return ClusterValue(weight, PathAggregate(weight, (weight, edge), (-weight, edge)))

    def vertex_value(self, vertex, weight):
        return weight

    def rake_combine(self, rep, rep_value, boundary, path_children, unary_children):
        total = rep_value + path_children[0].total + sum(c.total for c in unary_children)
        return ClusterValue(total, None)

    def compress_combine(self, rep, rep_value, boundary, path_children, unary_children):
        a, b = path_children
        total = rep_value + a.total + b.total + sum(c.total for c in unary_children)
        return ClusterValue(total, a.path.join(b.path, rep_value))

    def root_combine(self, rep, rep_value, unary_children):
        return ClusterValue(rep_value + sum(c.total for c in unary_children), None)


class SizeAlgebra(ClusterAlgebra):
    """Counts vertices and edges inside each cluster; a minimal custom algebra."""

    def edge_value(self, edge, weight):
        return (0, 1)

    def vertex_value(self, vertex, weight):
        return (1, 0)

    def _add(self, parts):
        return (sum(p[0] for p in parts), sum(p[1] for p in parts))

    def rake_combine(self, rep, rep_value, boundary, path_children, unary_children):
        return self._add([rep_value, *path_children, *unary_children])

    compress_combine = rake_combine

    def root_combine(self, rep, rep_value, unary_children):
        return self._add([rep_value, *unary_children])


@dataclass(frozen=True)
class Cluster:
    key: object
    kind: str
    representative: Optional[int]
    boundary: tuple
    children: tuple
    parent: Optional[int]
    value: object
    height: int


def cluster_kind(record, key):
    if isinstance(key, tuple):
        return BASE
    return _KIND[record.action[key]]


def get_cluster(record, key) -> Cluster:
    if isinstance(key, tuple):
        return Cluster(key, BASE, None, key, (), record.parent.get(key),
                       record.value.get(key), -1)
    return Cluster(key, _KIND[record.action[key]], key, record.boundary[key],
                   record.children[key], record.parent.get(key), record.value.get(key),
                   record.cround[key])


def cluster_of(record, v) -> Cluster:
    """The composite cluster whose representative is ``v``."""
    _check_vertex(record, v)
    return get_cluster(record, v)


def _check_vertex(record, v):
    if not (isinstance(v, int) and 0 <= v < record.n):
        from .errors import InvalidVertex
        raise InvalidVertex(v, record.n)


def ancestors(record, key):
    """``key`` and every cluster above it, bottom-up, ending at a root cluster."""
    chain = [key]
    parent = record.parent
    while True:
        p = parent.get(key)
        if p is None:
            return chain
        chain.append(p)
        key = p


def root_of(record, v):
    _check_vertex(record, v)
    return ancestors(record, v)[-1]


def height(record):
    """Number of clusters on the longest leaf-to-root chain."""
    best = 0
    for e in record.edges():
        best = max(best, len(ancestors(record, e)))
    for v in range(record.n):
        best = max(best, len(ancestors(record, v)))
    return best


def _recompute(record, v):
    alg = record.algebra
    rep_value = alg.vertex_value(v, record.vertex_weights[v])
    value, action = record.value, record.action
    path_children, unary_children = [], []
    for c in record.children[v]:
        if isinstance(c, tuple) or action[c] == COMPRESS:
            path_children.append(value[c])
        else:
            unary_children.append(value[c])
    act = action[v]
    if act == RAKE:
        return alg.rake_combine(v, rep_value, record.boundary[v], path_children, unary_children)
    if act == COMPRESS:
        return alg.compress_combine(v, rep_value, record.boundary[v], path_children, unary_children)
    return alg.root_combine(v, rep_value, unary_children)


def reaggregate(record, dirty) -> int:
    """Recompute every dirty cluster and all of its ancestors, bottom-up.

    Base edge clusters in ``dirty`` are expected to hold their new value
    already.  Returns the number of composite clusters recomputed.
    """
    closure = set()
    for key in dirty:
        while key is not None and key not in closure:
            closure.add(key)
            key = record.parent.get(key)
    composites = sorted((record.cround[v], v) for v in closure if not isinstance(v, tuple))
    for _, v in composites:
        record.value[v] = _recompute(record, v)
    return len(composites)


def _key_repr(key):
    if key is None:
        return "-"
    if isinstance(key, tuple):
        return f"e{key[0]}-{key[1]}"
    return str(key)


def serialize_rc(record) -> bytes:
    """Canonical byte stream of every cluster, ordered by cluster key."""
    out = [f"rctree n={record.n}"]
    for v in range(record.n):
        c = get_cluster(record, v)
        out.append(f"C {v} {c.kind} h={c.height} b={','.join(map(str, c.boundary))} "
                   f"ch={','.join(map(_key_repr, c.children))} p={_key_repr(c.parent)} "
                   f"val={c.value!r}")
    for e in sorted(k for k in record.value if isinstance(k, tuple)):
        out.append(f"E {e[0]}-{e[1]} p={_key_repr(record.parent.get(e))} "
                   f"val={record.value[e]!r}")
    return ("\n".join(out) + "\n").encode()


def to_dot(record) -> str:
    """Graphviz rendering: rake/root clusters as circles, compress as boxes."""
    shape = {UNARY: "circle", ROOT: "doublecircle", BINARY: "box"}
    out = ["digraph rctree {"]
    for v in range(record.n):
        out.append(f'  "{v}" [shape={shape[cluster_kind(record, v)]}];')
    for e in sorted(k for k in record.value if isinstance(k, tuple)):
        out.append(f'  "{_key_repr(e)}" [shape=plaintext];')
    for key, p in sorted(record.parent.items(), key=lambda kv: _key_repr(kv[0])):
        if p is not None:
            out.append(f'  "{p}" -> "{_key_repr(key)}";')
    out.append("}")
    return "\n".join(out) + "\n"


def structural_problems(record, edges):
    """List every violated RC-Tree invariant (empty when the tree is sound)."""
    problems = []
    if len(record.value) != record.n + len(edges):
        problems.append(f"census: {len(record.value)} clusters, expected {record.n + len(edges)}")
    arity = {UNARY: 1, BINARY: 2, ROOT: 0}
    seen_children = {}
    for v in range(record.n):
        kind = cluster_kind(record, v)
        if len(record.boundary[v]) != arity[kind]:
            problems.append(f"cluster {v}: {kind} with boundary {record.boundary[v]}")
        lst = record.adj[v][record.cround[v]]
        if tuple(s.key for s in lst if s is not None) != record.children[v]:
            problems.append(f"cluster {v}: children differ from its contraction list")
        for c in record.children[v]:
            if c in seen_children:
                problems.append(f"cluster {_key_repr(c)} has two parents")
            seen_children[c] = v
            if record.parent.get(c) != v:
                problems.append(f"cluster {_key_repr(c)}: parent pointer mismatch")
            if not isinstance(c, tuple) and record.cround[c] >= record.cround[v]:
                problems.append(f"cluster {c} is not lower than its parent {v}")
        if kind == ROOT and record.parent.get(v) is not None:
            problems.append(f"root cluster {v} has a parent")
    for v in range(record.n):
        if cluster_kind(record, v) != ROOT and v not in seen_children:
            problems.append(f"non-root cluster {v} has no parent")
    for e in edges:
        if e not in seen_children:
            problems.append(f"edge {e} is not a child of any cluster")
    return problems
