"""Static maximal tree contraction and the leveled record it produces.

Every live vertex owns an adjacency list of exactly ``t`` slots per round.  A
slot is ``None`` (empty) or a :class:`Slot` of one of three kinds:

* ``EDGE``   -- an original edge; ``key`` is the EdgeId, ``nbr`` the other end.
* ``BINARY`` -- a compressed path; ``key`` is the representative of the binary
  cluster, ``nbr`` its other boundary vertex.
* ``UNARY``  -- a raked subtree hanging off the owner; ``key`` is the
  representative, ``nbr`` is ``-1`` (it is not an edge).

Each round the live vertices of degree one and two form a chain graph, a
deterministic MIS of it contracts (rake for degree one, compress for degree
two), isolated vertices finalize into root clusters, and survivors rewrite the
slots that named a contracting neighbour.  Slots never move between positions,
so cluster child order is stable.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from ._parallel import parallel_map
from .chain_mis import ChainGraph, chain_mis
from .errors import NotIndependent, NotMaximal

EDGE, BINARY, UNARY = 1, 2, 3
# a contracting vertex's action equals its degree at that round
FINALIZE, RAKE, COMPRESS = 0, 1, 2
ACTION_NAMES = {FINALIZE: "finalize", RAKE: "rake", COMPRESS: "compress"}
# cround value for a vertex that is live in the updated forest past its old
# contraction round and has not been re-contracted yet
PENDING = 1 << 62


class Slot(NamedTuple):
    kind: int
    key: object
    nbr: int


def neighbors(lst):
    return [s.nbr for s in lst if s is not None and s.kind != UNARY]


def degree_of(lst):
    return sum(1 for s in lst if s is not None and s.kind != UNARY)


def rewrite_list(owner, lst, contracts, list_of):
    """Next-round list of a surviving ``owner``.

    ``contracts(x)`` tells whether neighbour ``x`` contracts this round and
    ``list_of(x)`` returns its current list.  Only the slot naming a
    contracting neighbour changes, so concurrent writers never collide.
    """
    out = []
    for s in lst:
        if s is None or s.kind == UNARY or not contracts(s.nbr):
            out.append(s)
            continue
        x = s.nbr
        xn = neighbors(list_of(x))
        if len(xn) == 1:
            out.append(Slot(UNARY, x, -1))
        else:
            out.append(Slot(BINARY, x, xn[1] if xn[0] == owner else xn[0]))
    return tuple(out)


def slot_repr(s):
    if s is None:
        return "_"
    if s.kind == EDGE:
        return f"e{s.key[0]}-{s.key[1]}"
    if s.kind == BINARY:
        return f"b{s.key}>{s.nbr}"
    return f"u{s.key}"


@dataclass
class ForestSnapshot:
    """Adjacency state of the partially contracted forest at one round.

    ``action`` is filled in by :func:`contract_round` with the decision of each
    vertex that contracts at this round.
    """

    round: int
    lists: dict
    action: dict = field(default_factory=dict)

    @property
    def live(self):
        return set(self.lists)

    @property
    def contracted_this_round(self):
        return set(self.action)

    def degree(self, v):
        return degree_of(self.lists[v])


def eligible_vertices(snap: ForestSnapshot) -> ChainGraph:
    """Chain graph on the live vertices of degree one or two."""
    lists = snap.lists
    members = {v for v, lst in lists.items() if 1 <= degree_of(lst) <= 2}
    return ChainGraph({v: tuple(u for u in neighbors(lists[v]) if u in members)
                       for v in members})


def _check_maximal(snap, chosen):
    lists = snap.lists
    for v in chosen:
        d = degree_of(lists[v])
        if d not in (1, 2):
            raise NotIndependent(f"round {snap.round}: chosen vertex {v} has degree {d}")
        for u in neighbors(lists[v]):
            if u in chosen:
                raise NotIndependent(f"round {snap.round}: {v} and {u} both contract")
    for v, lst in lists.items():
        if v in chosen or degree_of(lst) not in (1, 2):
            continue
        if not any(u in chosen for u in neighbors(lst)):
            raise NotMaximal(f"round {snap.round}: eligible {v} has no contracting neighbour")


def contract_round(snap: ForestSnapshot, chosen, *, debug=False, threads=1) -> ForestSnapshot:
    """Contract ``chosen`` plus every isolated vertex; return the next snapshot."""
    lists = snap.lists
    chosen = set(chosen)
    if debug:
        _check_maximal(snap, chosen)
    contracting = set(chosen)
    for v, lst in lists.items():
        if v in chosen:
            snap.action[v] = degree_of(lst)
        elif degree_of(lst) == 0:
            snap.action[v] = FINALIZE
            contracting.add(v)

    survivors = [v for v in lists if v not in contracting]
    step = lambda v: rewrite_list(v, lists[v], contracting.__contains__, lists.__getitem__)
    return ForestSnapshot(snap.round + 1, dict(zip(survivors, parallel_map(step, survivors, threads))))


class ContractionRecord:
    """All rounds of a contraction, plus the RC-Tree clusters it induced.

    Per vertex ``v``: ``adj[v][i]`` is its list at round ``i`` for every round it
    is live, ``cround[v]`` the round it contracts and ``action[v]`` how.  The
    composite cluster of ``v`` (keyed by ``v``) has ``boundary[v]`` and
    ``children[v]``; base edge clusters are keyed by their EdgeId.  ``parent``
    and ``value`` are keyed by cluster key.
    """

    def __init__(self, n, t, algebra=None, vertex_weights=None):
        self.n, self.t = n, t
        self.algebra = algebra
        self.vertex_weights = list(vertex_weights) if vertex_weights is not None else [0] * n
        self.adj = [[] for _ in range(n)]
        self.cround = [-1] * n
        self.action = [-1] * n
        self.boundary = [()] * n
        self.children = [()] * n
        self.parent = {}
        self.value = {}
        self.phase_info = {}

    @property
    def rounds(self):
        return max(self.cround) + 1 if self.n else 0

    def live_counts(self):
        counts = [0] * self.rounds
        for c in self.cround:
            for i in range(c + 1):
                counts[i] += 1
        return counts

    def is_live(self, v, i):
        return 0 <= i <= self.cround[v]

    def snapshot(self, i) -> ForestSnapshot:
        snap = ForestSnapshot(i, {v: self.adj[v][i] for v in range(self.n) if self.cround[v] >= i})
        snap.action = {v: self.action[v] for v in snap.lists if self.cround[v] == i}
        return snap

    def form_cluster(self, v, i, lst):
        """Record that ``v`` contracts at round ``i`` with list ``lst``."""
        self.cround[v] = i
        self.action[v] = degree_of(lst)
        self.boundary[v] = tuple(neighbors(lst))
        self.children[v] = tuple(s.key for s in lst if s is not None)
        for c in self.children[v]:
            self.parent[c] = v
        if self.action[v] == FINALIZE:
            self.parent[v] = None

    def install(self, snap: ForestSnapshot):
        for v, lst in snap.lists.items():
            self.adj[v].append(lst)
        for v in sorted(snap.action):
            self.form_cluster(v, snap.round, snap.lists[v])

    def edges(self):
        return sorted({s.key for v in range(self.n) if self.adj[v]
                       for s in self.adj[v][0] if s is not None})

    def serialize(self) -> bytes:
        """Canonical byte stream, round-major and vertex-id-minor."""
        out = [f"contraction n={self.n} t={self.t} rounds={self.rounds}"]
        for i in range(self.rounds):
            out.append(f"round {i}")
            for v in range(self.n):
                if self.cround[v] < i:
                    continue
                act = ACTION_NAMES[self.action[v]] if self.cround[v] == i else "-"
                slots = " ".join(slot_repr(s) for s in self.adj[v][i])
                out.append(f"{v} {act} {slots}")
        return ("\n".join(out) + "\n").encode()


def initial_lists(n, t, edges):
    """Round-0 lists: each vertex's edges in sorted EdgeId order, then empties."""
    lists = [[] for _ in range(n)]
    for e in sorted(edges):
        u, v = e
        lists[u].append(Slot(EDGE, e, v))
        lists[v].append(Slot(EDGE, e, u))
    return {v: tuple(lst) + (None,) * (t - len(lst)) for v, lst in enumerate(lists)}


def _select(snap, threads, fault):
    chosen = chain_mis(eligible_vertices(snap), threads)
    if fault == "drop-mis" and chosen:
        chosen.discard(min(chosen))
    return chosen


def _finish(record, forest):
    from .rc_tree import reaggregate
    for e, w in forest.edges.items():
        record.value[e] = record.algebra.edge_value(e, w)
    reaggregate(record, set(record.value) | set(range(record.n)))
    return record


def build_static(forest, *, threads=1, debug=False, fault=None) -> ContractionRecord:
    """Contract ``forest`` round by round until no vertex is live."""
    record = ContractionRecord(forest.n, forest.t, forest.algebra, forest.vertex_weights)
    snap = ForestSnapshot(0, initial_lists(forest.n, forest.t, forest.edges))
    while snap.lists:
        chosen = _select(snap, threads, fault)
        fault = None
        nxt = contract_round(snap, chosen, debug=debug, threads=threads)
        record.install(snap)
        snap = nxt
    return _finish(record, forest)


def phase_one_rounds(n):
    """Rounds until at most ``n / log2 n`` vertices remain (0 for tiny forests)."""
    if n <= 4:
        return 0
    return math.ceil(math.log(math.log2(n)) / math.log(6 / 5))


def build_static_phased(forest, *, threads=1, debug=False) -> ContractionRecord:
    """Same output as :func:`build_static`, different bookkeeping of live vertices.

    Phase one partitions the vertices by id into groups of about ``log2 n`` and
    filters each group after every round.  Phase two gathers the survivors once
    into a single pool and stops compacting: dead entries are skipped in place.
    """
    n = forest.n
    record = ContractionRecord(n, forest.t, forest.algebra, forest.vertex_weights)
    current = initial_lists(n, forest.t, forest.edges)
    size = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    groups = [list(range(s, min(s + size, n))) for s in range(0, n, size)]
    r1 = phase_one_rounds(n)

    i = 0
    while i < r1 and any(groups):
        snap = ForestSnapshot(i, {v: current[v] for g in groups for v in g})
        nxt = contract_round(snap, _select(snap, threads, None), debug=debug, threads=threads)
        record.install(snap)
        current = nxt.lists
        groups = [[v for v in g if v in current] for g in groups]
        i += 1
    pool = [v for g in groups for v in g]
    record.phase_info = {"phase_one_rounds": i, "live_after_phase_one": len(pool),
                         "groups": len(groups)}

    alive = set(pool)
    while alive:
        snap = ForestSnapshot(i, {v: current[v] for v in pool if v in alive})
        nxt = contract_round(snap, _select(snap, threads, None), debug=debug, threads=threads)
        record.install(snap)
        alive.difference_update(snap.action)
        current = nxt.lists
        i += 1
    return _finish(record, forest)
