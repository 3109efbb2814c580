"""Queries answered by climbing the RC-Tree.

Every query walks at most one leaf-to-root chain per argument, so its cost is
bounded by the RC-Tree height.  Path and subtree queries need the values of
:class:`~rcforest.rc_tree.PathSubtreeAlgebra`.
"""
from dataclasses import dataclass

from ._parallel import parallel_map
from .errors import ForestError, NotAdjacent, NotConnected, SameVertex
from .forest import edge_id
from .rc_tree import EMPTY_PATH, _check_vertex, ancestors

QUERY_KINDS = ("conn", "subtree", "psum", "pmax", "pmin", "lca")


def _vertex_value(record, v):
    return record.algebra.vertex_value(v, record.vertex_weights[v])


def connected(record, u, v) -> bool:
    _check_vertex(record, u)
    _check_vertex(record, v)
    return u == v or ancestors(record, u)[-1] == ancestors(record, v)[-1]


def subtree_sum(record, r, c):
    """Sum over the part of the tree reached from ``r`` through ``c``.

    The edge ``r-c`` and everything on ``c``'s side of it are included; ``r``
    and the rest of its side are not.
    """
    _check_vertex(record, r)
    _check_vertex(record, c)
    if r == c:
        raise NotAdjacent(r, c)
    e = edge_id(r, c)
    if e not in record.value:
        raise NotAdjacent(r, c)
    value, parent, children = record.value, record.parent, record.children
    side = {r: False, c: True}
    acc = value[e].total
    key = e
    while (p := parent.get(key)) is not None:
        on_c = side[p]
        if on_c:
            acc = acc + _vertex_value(record, p)
            for s in children[p]:
                if s != key:
                    acc = acc + value[s].total
        # a boundary not inherited from the current cluster comes from a sibling
        side = {b: side.get(b, on_c) for b in record.boundary[p]}
        key = p
    return acc


def _other_end(record, child, w):
    if isinstance(child, tuple):
        return child[1] if child[0] == w else child[0]
    a, b = record.boundary[child]
    return b if a == w else a


def _is_path_child(record, child):
    return isinstance(child, tuple) or record.action[child] == 2


def _reach(record, u):
    """Map each cluster on ``u``'s chain to the path aggregate from ``u`` to its
    representative (edges plus interior vertex weights, endpoints excluded)."""
    value = record.value
    reach = {u: EMPTY_PATH}
    dist = {}
    for s in record.children[u]:
        if _is_path_child(record, s):
            dist[_other_end(record, s, u)] = value[s].path
    key = u
    while (p := record.parent.get(key)) is not None:
        dw = dist[p]
        reach[p] = dw
        wval = _vertex_value(record, p)
        nxt = {}
        for s in record.children[p]:
            if s != key and _is_path_child(record, s):
                nxt[_other_end(record, s, p)] = dw.join(value[s].path, wval)
        for b in record.boundary[p]:
            if b not in nxt:
                nxt[b] = dist[b]
        dist = nxt
        key = p
    return reach


def _path_aggregate(record, u, v):
    _check_vertex(record, u)
    _check_vertex(record, v)
    if u == v:
        return EMPTY_PATH
    ru, rv = _reach(record, u), _reach(record, v)
    meet = next((key for key in ancestors(record, u) if key in rv), None)
    if meet is None:
        raise NotConnected(u, v)
    if meet == u:
        return rv[u]
    if meet == v:
        return ru[v]
    return ru[meet].join(rv[meet], _vertex_value(record, meet))


def path_sum(record, u, v):
    agg = _path_aggregate(record, u, v)
    total = agg.total
    if getattr(record.algebra, "include_endpoints", False):
        total = total + _vertex_value(record, u)
        if v != u:
            total = total + _vertex_value(record, v)
    return total


def path_extreme_edge(record, u, v, mode="max"):
    """``(edge, weight)`` of the heaviest (``max``) or lightest (``min``) edge
    on the ``u``-``v`` path; ties go to the smallest EdgeId."""
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    if u == v:
        _check_vertex(record, u)
        raise SameVertex(u)
    agg = _path_aggregate(record, u, v)
    if mode == "min":
        w, e = agg.min_key
        return e, w
    negw, e = agg.max_key
    return e, -negw


def lca(record, r, u, v):
    """Lowest common ancestor of ``u`` and ``v`` when the tree is rooted at ``r``.

    Equivalently the median of the three vertices.  The search descends from
    the root cluster keeping three targets, each either interior to the
    current cluster or one of its boundary vertices.  Whenever two targets
    fall into one child, the third is replaced by the representative (through
    which every path between that child and the rest passes).
    """
    for x in (r, u, v):
        _check_vertex(record, x)
    chains = {x: ancestors(record, x) for x in (r, u, v)}
    if not chains[r][-1] == chains[u][-1] == chains[v][-1]:
        a, b = (r, u) if chains[r][-1] != chains[u][-1] else (u, v)
        raise NotConnected(a, b)
    below = {}
    for x, chain in chains.items():
        below[x] = {chain[i + 1]: chain[i] for i in range(len(chain) - 1)}

    targets = [r, u, v]
    cluster = chains[r][-1]
    while True:
        a, b, c = targets
        if a == b or a == c:
            return a
        if b == c:
            return b
        x = cluster
        pos = [_position(record, cluster, y, below) for y in targets]
        if len(set(pos)) == 3:
            return x
        if pos[0] == pos[1] == pos[2]:
            cluster = pos[0]
            continue
        shared = pos[0] if pos[0] in (pos[1], pos[2]) else pos[1]
        targets = [y if p == shared else x for y, p in zip(targets, pos)]
        cluster = shared


def _position(record, cluster, y, below):
    """Which child of ``cluster`` holds target ``y`` (or ``"rep"`` for the
    representative itself)."""
    if y == cluster:
        return "rep"
    if y in record.boundary[cluster] or y not in below or cluster not in below[y]:
        for s in record.children[cluster]:
            if _is_path_child(record, s) and _other_end(record, s, cluster) == y:
                return s
        raise AssertionError(f"target {y} is not a boundary of cluster {cluster}")
    return below[y][cluster]


@dataclass(frozen=True)
class QueryRequest:
    kind: str
    args: tuple

    def __post_init__(self):
        arity = {"conn": 2, "subtree": 2, "psum": 2, "pmax": 2, "pmin": 2, "lca": 3}
        if self.kind not in arity:
            raise ValueError(f"unknown query kind {self.kind!r}")
        if len(self.args) != arity[self.kind]:
            raise ValueError(f"{self.kind} takes {arity[self.kind]} arguments")

    @classmethod
    def parse(cls, line):
        kind, *args = line.split()
        return cls(kind, tuple(int(a) for a in args))


def run_query(record, req: QueryRequest):
    k, a = req.kind, req.args
    if k == "conn":
        return connected(record, *a)
    if k == "subtree":
        return subtree_sum(record, *a)
    if k == "psum":
        return path_sum(record, *a)
    if k == "pmax":
        return path_extreme_edge(record, *a, mode="max")
    if k == "pmin":
        return path_extreme_edge(record, *a, mode="min")
    return lca(record, *a)


def batch_query(record, reqs, threads=1):
    """Answer ``reqs`` positionally; a failing request yields its exception."""
    def one(req):
        try:
            return run_query(record, req)
        except ForestError as exc:
            return exc

    return parallel_map(one, reqs, threads)


def format_answer(answer):
    if isinstance(answer, Exception):
        return f"error {type(answer).__name__}"
    if isinstance(answer, bool):
        return "true" if answer else "false"
    if isinstance(answer, tuple):
        (u, v), w = answer
        return f"{u} {v} {w}"
    return str(answer)
