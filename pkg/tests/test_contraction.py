import pytest

from rcforest import DynamicForest, NotIndependent, NotMaximal, build_static, build_static_phased
from rcforest.contraction import (
    BINARY,
    COMPRESS,
    FINALIZE,
    RAKE,
    UNARY,
    ForestSnapshot,
    contract_round,
    eligible_vertices,
    initial_lists,
    neighbors,
    phase_one_rounds,
)
from rcforest.generators import generate
from rcforest.invariants import log65_ceil, maximality_failures, round_bound, shrink_failures

from support import random_forest


def snapshot(n, edges, t=3):
    return ForestSnapshot(0, initial_lists(n, t, {(min(u, v), max(u, v)): 1 for u, v in edges}))


def test_eligible_star():
    g = eligible_vertices(snapshot(4, [(0, 1), (0, 2), (0, 3)]))
    assert g.members == {1, 2, 3}
    assert all(ns == () for ns in g.nbrs.values())


def test_eligible_path_of_four():
    g = eligible_vertices(snapshot(4, [(0, 1), (1, 2), (2, 3)]))
    assert g.members == {0, 1, 2, 3}
    assert sorted(g.nbrs[1]) == [0, 2]


def test_eligible_isolated():
    assert len(eligible_vertices(snapshot(1, []))) == 0


def test_compress_middle_of_path():
    snap = snapshot(3, [(0, 1), (1, 2)])
    nxt = contract_round(snap, {1})
    assert snap.action == {1: COMPRESS}
    assert set(nxt.lists) == {0, 2}
    (s0,) = [s for s in nxt.lists[0] if s is not None]
    (s2,) = [s for s in nxt.lists[2] if s is not None]
    assert s0.kind == s2.kind == BINARY
    assert s0.key == s2.key == 1
    assert (s0.nbr, s2.nbr) == (2, 0)


def test_star_leaves_rake_then_center_finalizes():
    snap = snapshot(4, [(0, 1), (0, 2), (0, 3)])
    nxt = contract_round(snap, {1, 2, 3})
    assert snap.action == {1: RAKE, 2: RAKE, 3: RAKE}
    assert set(nxt.lists) == {0}
    assert [s.kind for s in nxt.lists[0]] == [UNARY] * 3
    last = contract_round(nxt, set())
    assert nxt.action == {0: FINALIZE}
    assert last.lists == {}


def test_isolated_vertex_finalizes():
    snap = snapshot(1, [])
    assert contract_round(snap, set()).lists == {}
    assert snap.action == {0: FINALIZE}


def test_debug_rejects_bad_sets():
    with pytest.raises(NotIndependent):
        contract_round(snapshot(3, [(0, 1), (1, 2)]), {0, 1}, debug=True)
    with pytest.raises(NotMaximal):
        contract_round(snapshot(4, [(0, 1), (1, 2), (2, 3)]), {0}, debug=True)


def test_single_vertex_build():
    f = DynamicForest(1)
    assert f.record.rounds == 1 and len(f.record.value) == 1


def test_path_of_100_round_bound():
    assert log65_ceil(100) == 26
    f = DynamicForest.from_edges(100, generate("path", 100))
    assert f.record.rounds <= 26


def test_log65_ceil_exact():
    assert [log65_ceil(x) for x in (1, 2, 6 / 5, 1.44)] == [0, 4, 1, 2]
    assert round_bound(1) == 1 and round_bound(0) == 0


@pytest.mark.parametrize("shape", ["path", "star-capped-at-t", "random-ternary", "caterpillar"])
def test_build_invariants(shape):
    f = DynamicForest.from_edges(500, generate(shape, 500, 1), debug=True)
    rec = f.record
    assert maximality_failures(rec) == []
    assert shrink_failures(rec) == []
    assert rec.rounds <= round_bound(500)
    assert len(rec.value) == 500 + len(f.edges)


def _trees(rec, i):
    live = {v for v in range(rec.n) if rec.cround[v] >= i}
    seen, trees = set(), []
    for v in sorted(live):
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            x = stack.pop()
            for y in neighbors(rec.adj[x][i]):
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        trees.append(comp)
    return trees


@pytest.mark.parametrize("seed", range(8))
def test_per_tree_shrink(seed):
    f, _ = random_forest(300, seed, drop=0.05)
    rec = f.record
    for i in range(rec.rounds):
        for tree in _trees(rec, i):
            survivors = sum(1 for v in tree if rec.cround[v] > i)
            assert 6 * survivors <= 5 * len(tree) + 5, (i, len(tree), survivors)


def test_phase_one_rounds_formula():
    assert phase_one_rounds(4) == 0
    assert phase_one_rounds(1024) == 13


def test_phased_path_of_1024_after_phase_one():
    f = DynamicForest.from_edges(1024, generate("path", 1024))
    rec = build_static_phased(f)
    # a path finishes before the phase-one budget runs out
    assert rec.phase_info["phase_one_rounds"] == min(13, rec.rounds)
    assert rec.phase_info["live_after_phase_one"] <= 1024 // 10
    live = rec.live_counts() + [0] * 14
    assert live[13] <= 1024 // 10


@pytest.mark.parametrize("n", [1, 2, 3, 4, 17, 1000])
def test_phased_build_is_bit_identical(n):
    f = DynamicForest.from_edges(n, generate("random-ternary", n, n, drop=0.1))
    assert build_static_phased(f).serialize() == build_static(f).serialize()


def test_thread_count_does_not_change_build():
    edges = generate("random-ternary", 2000, 7)
    base = DynamicForest.from_edges(2000, edges).serialize()
    for threads in (2, 8):
        assert DynamicForest.from_edges(2000, edges, threads=threads).serialize() == base


def test_drop_mis_fault_breaks_maximality():
    f, _ = random_forest(64, 0)
    f.build(fault="drop-mis")
    assert maximality_failures(f.record) == [0]


def test_serialization_is_round_major():
    f = DynamicForest.from_edges(3, [(0, 1), (1, 2)])
    text = f.record.serialize().decode().splitlines()
    assert text[0] == "contraction n=3 t=3 rounds=2"
    assert text[1] == "round 0"
    assert [line.split()[0] for line in text[2:5]] == ["0", "1", "2"]


@pytest.mark.parametrize("t", [3, 4, 6])
def test_larger_degree_bounds(t):
    f = DynamicForest.from_edges(400, generate("random-ternary", 400, 2, t=t), t=t)
    assert max(f.degree(v) for v in range(400)) <= t
    assert maximality_failures(f.record) == []
    assert f.record.rounds <= round_bound(400)
