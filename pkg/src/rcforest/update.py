"""Batch edge updates by change propagation over the contraction record.

The record is patched in place, round by round.  At round ``i`` a vertex is
*affected* when

1. it is live in exactly one of the old and new forests,
2. it is live in both but its adjacency list differs, or
3. it is live in both, does not contract in the old forest, has at least one
   old neighbour that contracts, and all such neighbours are affected by (1)
   or (2).

Unaffected vertices keep their old slots and decisions.  Affected vertices of
degree one or two that have no unaffected neighbour contracting this round run
through the chain MIS; the winners contract, affected isolated vertices
finalize, and the rest survive.  The next affected set is the exact set of
vertices meeting the definition one round later, found among the affected
vertices and everything within distance two of them in either forest.  The
loop stops when a round has no affected vertex: from there on the two
contractions coincide.

The phased executor reaches the same affected sets by following how affection
spreads from each origin vertex (per-component filtering) in its first and
last phase, and by grouped distance-two scans in between.  Because the sets
are identical and the MIS depends only on the eligible chain graph, both
executors leave byte-identical records.
"""
import math
import time
from dataclasses import asdict, dataclass, field

from ._parallel import parallel_map
from .chain_mis import ChainGraph, chain_mis
from .contraction import (
    EDGE,
    PENDING,
    Slot,
    degree_of,
    neighbors,
    rewrite_list,
)
from .errors import AffectedBoundExceeded, InvariantError
from .rc_tree import reaggregate

AFFECTED_PER_EDIT = 312
INITIAL_PER_EDIT = 6
MAX_FRONTIERS = 2
MAX_GROWTH = 4
MAX_OLD_COMPONENT = 26


@dataclass(frozen=True)
class AffectedSet:
    """Affected vertices of one round; ``flags[v]`` is
    ``(alive_in_old, alive_in_new, case)``."""

    round: int
    members: tuple
    flags: dict

    def __len__(self):
        return len(self.members)


@dataclass
class UpdateStats:
    k: int
    rounds: int = 0
    per_round_affected: list = field(default_factory=list)
    total_touched: int = 0
    wall_time_ns: int = 0
    executor: str = "basic"
    examined: int = 0
    recomputed_clusters: int = 0
    phase_rounds: tuple = ()
    components: dict = field(default_factory=dict)
    fault_fired: bool = False
    affected_sets: list = field(default_factory=list, repr=False)

    def to_json(self):
        out = {key: getattr(self, key) for key in
               ("k", "rounds", "per_round_affected", "total_touched", "wall_time_ns")}
        out.update(executor=self.executor, examined=self.examined,
                   recomputed_clusters=self.recomputed_clusters)
        if self.phase_rounds:
            out["phase_rounds"] = list(self.phase_rounds)
        if self.components:
            out["components"] = self.components
        return out


def work_bound(n, k):
    """Envelope on total affected (vertex, round) pairs for a batch of ``k``."""
    if k == 0:
        return 0
    head = math.ceil(math.log(1 + n / k) / math.log(6 / 5))
    return AFFECTED_PER_EDIT * k * head + 12 * k


class _Patch:
    """State of one in-flight update: the record being patched plus a
    copy-on-write view of the record as it was before the update."""

    def __init__(self, record, threads=1, fault=None):
        self.rec = record
        self.threads = threads
        self.fault = fault
        self.saved = {}
        self.dirty = set()
        self.examined = 0

    # -- old/new views ------------------------------------------------------
    def save(self, v):
        if v not in self.saved:
            rec = self.rec
            self.saved[v] = (list(rec.adj[v]), rec.cround[v])

    def old_cround(self, v):
        s = self.saved.get(v)
        return s[1] if s is not None else self.rec.cround[v]

    def old_list(self, v, i):
        s = self.saved.get(v)
        return (s[0] if s is not None else self.rec.adj[v])[i]

    def old_nbrs(self, v, i):
        return neighbors(self.old_list(v, i)) if self.old_cround(v) >= i else []

    def new_nbrs(self, v, i):
        return neighbors(self.rec.adj[v][i]) if self.rec.cround[v] >= i else []

    def any_nbrs(self, v, i):
        return set(self.old_nbrs(v, i)).union(self.new_nbrs(v, i))

    def contracts_somewhere(self, v, i):
        return self.old_cround(v) == i or self.rec.cround[v] == i

    # -- the affected predicate ---------------------------------------------
    def _changed(self, x, r, memo):
        """Cases 1 and 2: live in one forest only, or live in both with a
        different list."""
        hit = memo.get(x)
        if hit is None:
            old_live = self.old_cround(x) >= r
            new_live = self.rec.cround[x] >= r
            if old_live != new_live:
                hit = 1
            elif old_live and self.old_list(x, r) != self.rec.adj[x][r]:
                hit = 2
            else:
                hit = 0
            memo[x] = hit
        return hit

    def affected_case(self, x, r, memo):
        """0 when ``x`` is unaffected at round ``r``, else the case number."""
        hit = self._changed(x, r, memo)
        if hit:
            return hit
        if self.old_cround(x) < r or self.rec.cround[x] < r or self.old_cround(x) == r:
            return 0
        contracting = [u for u in neighbors(self.old_list(x, r)) if self.old_cround(u) == r]
        if contracting and all(self._changed(u, r, memo) for u in contracting):
            if self.fault == "skip-case3":
                self.fault = None
                return 0
            return 3
        return 0

    def describe(self, r, A):
        memo, fault, self.fault = {}, self.fault, None
        flags = {v: (self.old_cround(v) >= r, self.rec.cround[v] >= r,
                     self.affected_case(v, r, memo)) for v in A}
        self.fault = fault
        return AffectedSet(r, tuple(A), flags)

    def filter_affected(self, candidates, r, memo=None):
        memo = {} if memo is None else memo
        cand = sorted(candidates)
        self.examined += len(cand)
        return [x for x in cand if self.affected_case(x, r, memo)]

    def scan_candidates(self, A, i):
        """Affected vertices of round ``i`` plus everything within distance
        two of them, over the old and new forests."""
        near = set(A)
        for v in A:
            near |= self.any_nbrs(v, i)
        far = set(near)
        for x in near:
            far |= self.any_nbrs(x, i + 1)
        return far

    # -- round 0 ------------------------------------------------------------
    def apply_edit(self, edit, algebra):
        rec = self.rec
        for e in edit.deletions:
            for x in e:
                self.save(x)
                rec.adj[x][0] = tuple(None if (s is not None and s.key == e) else s
                                      for s in rec.adj[x][0])
            rec.parent.pop(e, None)
            rec.value.pop(e, None)
        for e, w in edit.insertions.items():
            for x in e:
                self.save(x)
                lst = list(rec.adj[x][0])
                lst[lst.index(None)] = Slot(EDGE, e, e[1] if x == e[0] else e[0])
                rec.adj[x][0] = tuple(lst)
            rec.value[e] = algebra.edge_value(e, w)
            rec.parent[e] = None
            self.dirty.add(e)

    def initial_affected(self, edit):
        ends = edit.endpoints
        cand = set(ends)
        for x in ends:
            cand |= self.any_nbrs(x, 0)
        return self.filter_affected(cand, 0)

    # -- one round ----------------------------------------------------------
    def process_round(self, i, A):
        rec = self.rec
        aset = set(A)
        alive = [v for v in A if rec.cround[v] >= i]
        nb = {v: neighbors(rec.adj[v][i]) for v in alive}

        def blocked(v):
            return any(u not in aset and self.old_cround(u) == i for u in nb[v])

        eligible = [v for v in alive if len(nb[v]) in (1, 2) and not blocked(v)]
        eset = set(eligible)
        g = ChainGraph({v: tuple(u for u in nb[v] if u in eset) for v in eligible})
        mis = chain_mis(g, self.threads)
        decide = {v: (v in mis or not nb[v]) for v in alive}

        def contracts(x):
            if x in decide:
                return decide[x]
            return self.old_cround(x) == i

        touched = set(alive)
        for v in alive:
            touched.update(nb[v])
        survivors = sorted(w for w in touched if not contracts(w))
        step = lambda w: rewrite_list(w, rec.adj[w][i], contracts, lambda x: rec.adj[x][i])
        for w, new in zip(survivors, parallel_map(step, survivors, self.threads)):
            lists = rec.adj[w]
            if len(lists) > i + 1:
                if lists[i + 1] != new:
                    self.save(w)
                    lists[i + 1] = new
            else:
                self.save(w)
                lists.append(new)

        for v in alive:
            self.save(v)
            if decide[v]:
                del rec.adj[v][i + 1:]
                rec.form_cluster(v, i, rec.adj[v][i])
                self.dirty.add(v)
            elif rec.cround[v] <= i:
                rec.cround[v] = PENDING
        return {"alive": alive, "eligible": eligible, "mis": mis}


class _Components:
    """Affected components: one per origin vertex of round 0, grown by
    following how affection spreads.

    With ``dedupe`` a vertex that several components spread to goes only to
    the component whose spreader has the lowest id, which makes the
    components disjoint (the phased executor relies on this).  Without it a
    vertex may be counted in several components, as in the bound analysis.
    """

    def __init__(self, patch, A0, dedupe):
        self.patch = patch
        self.dedupe = dedupe
        self.comps = [[v] for v in A0]

    @classmethod
    def from_members(cls, patch, members, dedupe):
        return cls(patch, list(members), dedupe)

    def advance(self, i, A, memo):
        """Components for round ``i + 1`` given the exact set ``A`` of round ``i``."""
        p, r = self.patch, i + 1
        aset = set(A)
        claims = {}  # newly affected vertex -> (spreader, component index)

        def claim(x, spreader, j):
            best = claims.get(x)
            if best is None:
                claims[x] = [(spreader, j)]
            elif self.dedupe:
                if (spreader, j) < best[0]:
                    claims[x] = [(spreader, j)]
            elif all(jj != j for _, jj in best):
                best.append((spreader, j))

        persist = []
        for j, comp in enumerate(self.comps):
            keep = [v for v in comp if p.affected_case(v, r, memo)]
            persist.append(keep)
            for u in comp:
                if p.contracts_somewhere(u, i):
                    for x in sorted(p.any_nbrs(u, i)):
                        if x not in aset and p.affected_case(x, r, memo):
                            claim(x, u, j)
        members = [list(k) for k in persist]
        for x, owners in claims.items():
            for _, j in owners:
                members[j].append(x)
        # spreading by dependence: from members that contract in the old forest
        # at round r to neighbours that stay and relied on them
        dep = {}
        for j, comp in enumerate(members):
            for u in comp:
                if p.old_cround(u) != r:
                    continue
                for x in p.old_nbrs(u, r):
                    if x in aset or x in claims or p.old_cround(x) == r:
                        continue
                    if p.affected_case(x, r, memo):
                        dep.setdefault(x, []).append((u, j))
        for x, owners in dep.items():
            owners.sort()
            chosen = owners[:1] if self.dedupe else owners
            for j in sorted({j for _, j in chosen}):
                members[j].append(x)
        self.comps = [sorted(set(c)) for c in members]
        return self.comps

    def union(self):
        return sorted({v for c in self.comps for v in c})


def _component_metrics(patch, i, comps, aset, prev_comps):
    """Frontier counts, growth and old-forest sizes of the components at round ``i``."""
    frontiers = size_old = growth = 0
    not_tree = 0
    for j, comp in enumerate(comps):
        members = set(comp)
        f = sum(1 for v in comp if any(u not in aset for u in patch.any_nbrs(v, i)))
        frontiers = max(frontiers, f)
        old = {v for v in comp if patch.old_cround(v) >= i}
        size_old = max(size_old, len(old))
        if prev_comps is not None:
            growth = max(growth, len(members - set(prev_comps[j])))
        if old and not _connected_in_old(patch, i, old):
            not_tree += 1
    return frontiers, growth, size_old, not_tree


def _connected_in_old(patch, i, verts):
    start = next(iter(verts))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for u in patch.old_nbrs(v, i):
            if u in verts and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(verts)


def batch_update(forest, edit, *, executor="basic", threads=1, debug=False,
                 fault=None) -> UpdateStats:
    """Apply a :class:`~rcforest.forest.ValidatedEdit` to ``forest`` in place.

    ``debug`` turns on the affected-set bounds, the per-component checks and a
    full maximality sweep of the patched record.  ``fault`` injects a known
    defect for mutation testing (``"skip-case3"``).
    """
    if executor not in ("basic", "phased"):
        raise ValueError(f"unknown executor {executor!r}")
    start = time.perf_counter_ns()
    rec = forest.record
    stats = UpdateStats(k=edit.k, executor=executor)
    if edit.k == 0:
        stats.wall_time_ns = time.perf_counter_ns() - start
        return stats

    patch = _Patch(rec, threads, fault)
    patch.apply_edit(edit, rec.algebra)
    A = patch.initial_affected(edit)
    if debug and len(A) > INITIAL_PER_EDIT * edit.k:
        raise AffectedBoundExceeded(f"|A0| = {len(A)} > {INITIAL_PER_EDIT * edit.k}")

    tracker = _Components(patch, A, dedupe=False) if debug and executor == "basic" else None
    metrics = {"max_frontiers": 0, "max_growth": 0, "max_old_size": 0, "not_tree": 0,
               "unattributed": 0}
    if executor == "phased":
        run = _PhasedSchedule(patch, forest.n, edit.k, A)

    i = 0
    while A:
        stats.per_round_affected.append(len(A))
        if debug:
            stats.affected_sets.append(patch.describe(i, A))
            if len(A) > AFFECTED_PER_EDIT * edit.k:
                raise AffectedBoundExceeded(
                    f"round {i}: |A| = {len(A)} > {AFFECTED_PER_EDIT * edit.k}")
        patch.process_round(i, A)
        memo = {}
        if executor == "phased":
            nxt = run.next_affected(i, A, memo)
        else:
            nxt = patch.filter_affected(patch.scan_candidates(A, i), i + 1, memo)
        if tracker is not None:
            before = [list(c) for c in tracker.comps]
            f, _, s, nt = _component_metrics(patch, i, before, set(A), None)
            comps = tracker.advance(i, A, memo)
            _, g, _, _ = _component_metrics(patch, i + 1, comps, set(nxt), before)
            metrics["max_frontiers"] = max(metrics["max_frontiers"], f)
            metrics["max_old_size"] = max(metrics["max_old_size"], s)
            metrics["not_tree"] += nt
            metrics["max_growth"] = max(metrics["max_growth"], g)
            metrics["unattributed"] += len(set(nxt) - set(tracker.union()))
            tracker.comps = [[v for v in c if v in set(nxt)] for c in comps]
        A = nxt
        i += 1

    stats.rounds = i
    stats.fault_fired = fault is not None and patch.fault is None
    stats.total_touched = sum(stats.per_round_affected)
    stats.examined = patch.examined
    if executor == "phased":
        stats.phase_rounds = tuple(run.phase_rounds)
    if tracker is not None:
        stats.components = metrics
    stats.recomputed_clusters = reaggregate(rec, patch.dirty)
    forest._after_update(edit)
    if debug:
        _debug_checks(forest, stats, metrics if tracker is not None else None)
    stats.wall_time_ns = time.perf_counter_ns() - start
    return stats


def _debug_checks(forest, stats, metrics):
    rec = forest.record
    if any(c >= PENDING for c in rec.cround):
        raise InvariantError("a vertex never re-contracted")
    from .contraction import _check_maximal
    for i in range(rec.rounds):
        snap = rec.snapshot(i)
        _check_maximal(snap, {v for v, a in snap.action.items() if a != 0})
    if metrics is None:
        return
    if metrics["max_frontiers"] > MAX_FRONTIERS:
        raise InvariantError(f"component with {metrics['max_frontiers']} frontiers")
    if metrics["max_growth"] > MAX_GROWTH:
        raise InvariantError(f"component grew by {metrics['max_growth']} in one round")
    if metrics["max_old_size"] > MAX_OLD_COMPONENT:
        raise InvariantError(f"component with {metrics['max_old_size']} old-forest vertices")
    if metrics["not_tree"]:
        raise InvariantError("affected component is not a tree in the old forest")
    if metrics["unattributed"]:
        raise InvariantError("affected vertex not reached by spreading from any component")


class _PhasedSchedule:
    """Affected-set bookkeeping of the three-phase executor.

    Phase one (``log_{6/5}(1 + n/k)`` rounds) and phase three keep disjoint
    affected components and filter each one on its own.  Phase two
    (``log2 log2 k`` rounds) gathers the affected vertices into one array,
    splits it into groups of about ``log2 k`` and filters each group after a
    distance-two scan.
    """

    def __init__(self, patch, n, k, A0):
        self.patch = patch
        self.r1 = math.ceil(math.log(1 + n / k) / math.log(6 / 5))
        self.r2 = math.ceil(math.log2(math.log2(k))) if k >= 4 else 0
        self.comps = _Components(patch, A0, dedupe=True)
        self.phase = 1
        self.phase_rounds = [0, 0, 0]

    def next_affected(self, i, A, memo):
        if self.phase == 1 and i >= self.r1:
            self.phase = 2
        if self.phase == 2 and i >= self.r1 + self.r2:
            self.phase = 3
            self.comps = _Components.from_members(self.patch, A, dedupe=True)
        self.phase_rounds[self.phase - 1] += 1
        if self.phase == 2:
            return self._grouped(i, A, memo)
        comps = self.comps.advance(i, A, memo)
        seen = set()
        for c in comps:
            if seen.intersection(c):
                raise InvariantError("phased components overlap")
            seen.update(c)
        return sorted(seen)

    def _grouped(self, i, A, memo):
        patch = self.patch
        size = max(1, math.ceil(math.log2(max(2, len(A)))))
        out = set()
        for s in range(0, len(A), size):
            group = A[s:s + size]
            out.update(patch.filter_affected(patch.scan_candidates(group, i), i + 1, memo))
        result = sorted(out)
        # phase three restarts from singleton components, phase two ends here
        self.comps = _Components.from_members(patch, result, dedupe=True)
        return result
