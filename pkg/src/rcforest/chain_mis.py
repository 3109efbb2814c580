"""Deterministic maximal independent sets on chains (max-degree-2 graphs).

The MIS is computed in two stages:

1. ``color_chains``: deterministic coin tossing.  Every edge ``{a, b}`` with
   ``a < b`` is oriented from ``a`` to ``b``.  Each vertex has at most two such
   out-neighbours, so the edges split into two rooted forests (forest ``j``
   holds the edge to the ``j``-th larger neighbour).  Each forest is coloured by
   iterated bit reduction starting from the vertex ids, the pair of colours is a
   proper colouring of the whole chain graph, and a sweep over the colour
   classes recolours it with at most three colours.
2. ``mis_from_coloring``: colour classes are visited in increasing order and a
   vertex joins the set iff none of its neighbours already has.

Both stages only look at ids and adjacency, so the result does not depend on
iteration order or on the number of worker threads.
"""
from dataclasses import dataclass
from typing import Mapping

from ._parallel import parallel_map
from .errors import MalformedChain

# colour a root compares itself against: all bits set, outside the id space
VIRTUAL_COLOR = -1


@dataclass(frozen=True)
class ChainGraph:
    """Induced subgraph of a forest on which every member has <= 2 neighbours.

    ``nbrs`` maps each member to the tuple of its member-neighbours.
    """

    nbrs: Mapping[int, tuple]

    def __post_init__(self):
        for v, ns in self.nbrs.items():
            if len(ns) > 2:
                raise MalformedChain(f"vertex {v} has {len(ns)} chain neighbours")

    @classmethod
    def from_edges(cls, members, edges):
        adj = {v: [] for v in members}
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        return cls({v: tuple(ns) for v, ns in adj.items()})

    @property
    def members(self):
        return frozenset(self.nbrs)

    def __len__(self):
        return len(self.nbrs)


@dataclass(frozen=True)
class Coloring:
    color: Mapping[int, int]

    @property
    def num_colors(self):
        return len(set(self.color.values()))

    def __getitem__(self, v):
        return self.color[v]


def _cv_step(own, other):
    # index of the lowest bit where the two colours differ, and our bit there
    diff = own ^ other
    i = (diff & -diff).bit_length() - 1
    return 2 * i + ((own >> i) & 1)


def _reduce_forest(parent, threads=1):
    """Iterated bit reduction on a rooted forest given as ``vertex -> parent``."""
    color = {v: v for v in parent}
    if not color:
        return color
    order = list(parent)
    top = max(color.values())
    while True:
        def step(v):
            p = parent[v]
            return _cv_step(color[v], VIRTUAL_COLOR if p is None else color[p])

        new = dict(zip(order, parallel_map(step, order, threads)))
        new_top = max(new.values())
        if new_top >= top:
            return color
        color, top = new, new_top


def color_chains(g: ChainGraph, threads=1) -> Coloring:
    """Proper colouring of ``g`` with at most three colours."""
    ups = {v: sorted(u for u in ns if u > v) for v, ns in g.nbrs.items()}
    pair = {v: [] for v in g.nbrs}
    for j in (0, 1):
        parent = {v: (up[j] if len(up) > j else None) for v, up in ups.items()}
        for v, c in _reduce_forest(parent, threads).items():
            pair[v].append(c)

    classes = {}
    for v, c in pair.items():
        classes.setdefault(tuple(c), []).append(v)

    final = {}
    for key in sorted(classes):
        # members of one class are pairwise non-adjacent, so this is a parallel step
        def pick(v):
            used = {final[u] for u in g.nbrs[v] if u in final}
            return next(c for c in range(3) if c not in used)

        members = classes[key]
        final.update(zip(members, parallel_map(pick, members, threads)))
    return Coloring(final)


def mis_from_coloring(g: ChainGraph, col: Coloring) -> set:
    by_color = {}
    for v in g.nbrs:
        by_color.setdefault(col[v], []).append(v)
    chosen = set()
    for c in sorted(by_color):
        picks = [v for v in by_color[c] if not any(u in chosen for u in g.nbrs[v])]
        chosen.update(picks)
    return chosen


def chain_mis(g: ChainGraph, threads=1) -> set:
    if not g.nbrs:
        return set()
    return mis_from_coloring(g, color_chains(g, threads))
