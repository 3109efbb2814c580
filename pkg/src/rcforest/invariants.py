"""Whole-record invariant sweeps shared by the CLI ``check`` command and the tests."""
from fractions import Fraction

from .contraction import COMPRESS, RAKE, degree_of, neighbors
from .oracle import oracle_mis_check
from .rc_tree import structural_problems


def log65_ceil(x):
    """Smallest integer ``r >= 0`` with ``(6/5)**r >= x``, computed exactly."""
    r, p = 0, Fraction(1)
    while p < x:
        p *= Fraction(6, 5)
        r += 1
    return r


def round_bound(n):
    return log65_ceil(n) + 1 if n else 0


def round_graph(record, i):
    """``(nbrs, chosen)`` at round ``i``: the chain graph of eligible vertices
    and the set that raked or compressed."""
    lists = {v: record.adj[v][i] for v in range(record.n) if record.cround[v] >= i}
    elig = {v for v, lst in lists.items() if degree_of(lst) in (1, 2)}
    nbrs = {v: [u for u in neighbors(lists[v]) if u in elig] for v in elig}
    chosen = {v for v in lists if record.cround[v] == i and record.action[v] in (RAKE, COMPRESS)}
    return nbrs, chosen


def maximality_failures(record):
    """Rounds whose contracted set is not a maximal independent set of the
    eligible vertices."""
    bad = []
    for i in range(record.rounds):
        nbrs, chosen = round_graph(record, i)
        if not oracle_mis_check(nbrs, chosen):
            bad.append(i)
    return bad


def shrink_failures(record):
    """Rounds ``i`` where the forest had no isolated vertex and yet more than
    five sixths of its live vertices survived."""
    live = record.live_counts() + [0]
    bad = []
    for i in range(record.rounds):
        isolated = any(record.cround[v] >= i and degree_of(record.adj[v][i]) == 0
                       for v in range(record.n))
        if not isolated and 6 * live[i + 1] > 5 * live[i]:
            bad.append(i)
    return bad


def sweep(forest):
    """Every failed invariant of ``forest``'s record as a list of messages."""
    rec = forest.record
    out = [f"NotMaximal: round {i}: contracted set is not a maximal independent set"
           for i in maximality_failures(rec)]
    out += [f"round {i}: forest shrank by less than 1/6" for i in shrink_failures(rec)]
    if rec.rounds > round_bound(rec.n):
        out.append(f"{rec.rounds} rounds exceeds the bound {round_bound(rec.n)}")
    out += structural_problems(rec, forest.edges)
    return out
