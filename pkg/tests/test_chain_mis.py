import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcforest.chain_mis import (
    ChainGraph,
    Coloring,
    _cv_step,
    chain_mis,
    color_chains,
    mis_from_coloring,
)
from rcforest.errors import MalformedChain
from rcforest.oracle import oracle_mis_check


@st.composite
def chain_graphs(draw, max_size=60):
    """Disjoint paths over distinct random ids."""
    ids = draw(st.lists(st.integers(0, 10**6), unique=True, max_size=max_size))
    cuts = draw(st.lists(st.booleans(), min_size=len(ids), max_size=len(ids)))
    edges = [(a, b) for (a, b), cut in zip(zip(ids, ids[1:]), cuts) if not cut]
    return ChainGraph.from_edges(ids, edges)


def is_proper(g, col):
    return all(col[v] != col[u] for v, ns in g.nbrs.items() for u in ns)


def test_malformed_chain():
    with pytest.raises(MalformedChain):
        ChainGraph({0: (1, 2, 3), 1: (0,), 2: (0,), 3: (0,)})


def test_cv_step_against_virtual_color():
    # -1 has every bit set, so the first differing bit is our lowest zero bit
    assert _cv_step(0b1011, -1) == 2 * 2 + 0
    assert _cv_step(6, 4) == 2 * 1 + 1


def test_single_vertex_color():
    col = color_chains(ChainGraph({7: ()}))
    assert col[7] == 0 and col.num_colors == 1


def test_edge_gets_two_colors():
    g = ChainGraph.from_edges([5, 9], [(5, 9)])
    col = color_chains(g)
    assert col[5] != col[9]


def test_path_of_64_uses_at_most_six_colors():
    g = ChainGraph.from_edges(range(64), [(i, i + 1) for i in range(63)])
    col = color_chains(g)
    assert is_proper(g, col)
    assert col.num_colors <= 6


def test_mis_single_vertex():
    g = ChainGraph({3: ()})
    assert mis_from_coloring(g, Coloring({3: 0})) == {3}


def test_mis_lower_color_wins():
    g = ChainGraph.from_edges([1, 2], [(1, 2)])
    assert mis_from_coloring(g, Coloring({1: 1, 2: 0})) == {2}


def test_mis_path_of_three_hand_trace():
    g = ChainGraph.from_edges([1, 2, 3], [(1, 2), (2, 3)])
    s = mis_from_coloring(g, Coloring({1: 0, 2: 1, 3: 0}))
    assert s == {1, 3}
    assert oracle_mis_check(g.nbrs, s)


def test_empty_graph():
    assert chain_mis(ChainGraph({})) == set()


def test_path_of_three_against_enumeration():
    g = ChainGraph.from_edges([4, 8, 6], [(4, 8), (8, 6)])
    s = chain_mis(g)
    maximal_sets = [set(c) for r in range(4) for c in itertools.combinations([4, 8, 6], r)
                    if oracle_mis_check(g.nbrs, c)]
    assert s in maximal_sets
    assert len(s) in (1, 2)


def test_long_path_density():
    g = ChainGraph.from_edges(range(1000), [(i, i + 1) for i in range(999)])
    s = chain_mis(g)
    assert oracle_mis_check(g.nbrs, s)
    assert len(s) >= -(-1000 // 3)


@settings(max_examples=300, deadline=None)
@given(chain_graphs())
def test_coloring_proper_and_small(g):
    col = color_chains(g)
    assert set(col.color) == set(g.nbrs)
    assert is_proper(g, col)
    assert col.num_colors <= 6


@settings(max_examples=300, deadline=None)
@given(chain_graphs())
def test_mis_independent_maximal_dense(g):
    s = chain_mis(g)
    assert oracle_mis_check(g.nbrs, s)
    assert 3 * len(s) >= len(g)


@settings(max_examples=100, deadline=None)
@given(chain_graphs(max_size=200), st.randoms(use_true_random=False))
def test_mis_independent_of_order_and_threads(g, rnd):
    items = list(g.nbrs.items())
    rnd.shuffle(items)
    shuffled = ChainGraph(dict(items))
    expected = chain_mis(g)
    assert chain_mis(shuffled) == expected
    assert chain_mis(g, threads=4) == expected


def test_large_chain_threads_agree():
    rng = random.Random(3)
    ids = rng.sample(range(10**7), 5000)
    g = ChainGraph.from_edges(ids, [(a, b) for a, b in zip(ids, ids[1:]) if rng.random() < 0.9])
    assert chain_mis(g, threads=1) == chain_mis(g, threads=8)
