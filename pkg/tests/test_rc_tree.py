import pytest

from rcforest import DynamicForest, SizeAlgebra
from rcforest.contraction import build_static
from rcforest.generators import generate
from rcforest.invariants import round_bound
from rcforest.rc_tree import (
    BINARY,
    ROOT,
    UNARY,
    _recompute,
    ancestors,
    cluster_of,
    get_cluster,
    height,
    reaggregate,
    root_of,
    serialize_rc,
    structural_problems,
    to_dot,
)

from support import random_forest


def test_isolated_vertex_is_root_cluster():
    f = DynamicForest(3)
    c = cluster_of(f.record, 1)
    assert c.kind == ROOT and c.boundary == () and c.parent is None


def test_compressed_middle_vertex():
    f = DynamicForest.from_edges(3, [(0, 1), (1, 2)])
    rec = f.record
    if rec.cround[1] == 0:
        c = cluster_of(rec, 1)
        assert c.kind == BINARY and sorted(c.boundary) == [0, 2]
        assert c.children == ((0, 1), (1, 2))
    else:
        # the MIS picked both ends; they rake into 1, which finalizes
        assert cluster_of(rec, 0).kind == cluster_of(rec, 2).kind == UNARY
        assert cluster_of(rec, 1).kind == ROOT


# The tree of the running example in the literature on RC-Trees, with letters
# a..n mapped to 0..13.  Our MIS differs from any particular drawing, so the
# check is structural: every cluster's children are its representative's
# slots at contraction time, and the census and arities hold.
FIG_TREE = [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6), (6, 7), (7, 8), (7, 9),
            (9, 10), (10, 11), (10, 12), (12, 13)]


def test_example_tree_structure():
    f = DynamicForest.from_edges(14, FIG_TREE)
    rec = f.record
    assert structural_problems(rec, f.edges) == []
    for v in range(14):
        c = cluster_of(rec, v)
        lst = rec.adj[v][rec.cround[v]]
        assert c.children == tuple(s.key for s in lst if s is not None)
        assert len(c.boundary) == {UNARY: 1, BINARY: 2, ROOT: 0}[c.kind]


def test_root_of_separates_components():
    f = DynamicForest.from_edges(3, [(0, 1)])
    assert root_of(f.record, 0) != root_of(f.record, 2)
    assert root_of(f.record, 0) == root_of(f.record, 1)


def test_root_of_same_on_long_path():
    f = DynamicForest.from_edges(50, generate("path", 50))
    roots = {root_of(f.record, v) for v in range(50)}
    assert len(roots) == 1


@pytest.mark.parametrize("seed", range(6))
def test_height_within_round_bound(seed):
    f, _ = random_forest(512, seed)
    rec = f.record
    assert height(rec) - 1 <= rec.rounds <= round_bound(512)
    for v in range(512):
        assert len(ancestors(rec, v)) <= rec.rounds


def test_reaggregate_empty_is_noop():
    f, _ = random_forest(64, 1)
    before = dict(f.record.value)
    assert reaggregate(f.record, set()) == 0
    assert f.record.value == before


def test_edge_weight_change_touches_only_ancestors():
    f = DynamicForest.from_edges(8, generate("path", 8))
    e = (3, 4)
    chain = ancestors(f.record, e)
    assert f.record.parent[e] is not None
    f.edges[e] = 50
    f.record.value[e] = f.algebra.edge_value(e, 50)
    recomputed = reaggregate(f.record, {e})
    assert recomputed == len(chain) - 1  # every composite above the base edge


def test_set_edge_weight_keeps_values_consistent():
    f, nf = random_forest(64, 2)
    e = sorted(f.edges)[5]
    f.set_edge_weight(*e, 1000)
    fresh = build_static(f)
    assert fresh.value == f.record.value


def test_full_reaggregate_matches_build():
    f, _ = random_forest(256, 3)
    values = dict(f.record.value)
    reaggregate(f.record, set(range(256)))
    assert f.record.value == values


def test_size_algebra_counts_subtrees():
    f = DynamicForest.from_edges(200, generate("random-ternary", 200, 4, drop=0.1),
                                 algebra=SizeAlgebra())
    rec = f.record
    roots = {root_of(rec, v) for v in range(200)}
    total = [0, 0]
    for r in roots:
        vs, es = rec.value[r]
        total[0] += vs
        total[1] += es
    assert total == [200, len(f.edges)]


def test_every_value_is_fold_of_children():
    f, _ = random_forest(256, 5)
    rec = f.record
    for v in range(256):
        assert rec.value[v] == _recompute(rec, v)


def test_census_and_parent_consistency():
    f, _ = random_forest(300, 6)
    rec = f.record
    assert len(rec.value) == 300 + len(f.edges)
    for key, p in rec.parent.items():
        if p is not None:
            assert key in get_cluster(rec, p).children


def test_structural_checker_catches_broken_parent():
    f, _ = random_forest(64, 7)
    rec = f.record
    child = next(v for v in range(64) if rec.parent.get(v) is not None)
    rec.parent[child] = None
    assert any(str(child) in p for p in structural_problems(rec, f.edges))


def test_serializations_and_dot():
    f = DynamicForest.from_edges(3, [(0, 1), (1, 2)])
    text = serialize_rc(f.record).decode()
    assert text.startswith("rctree n=3\nC 0 ")
    assert "E 0-1" in text
    dot = to_dot(f.record)
    assert dot.startswith("digraph rctree {") and dot.rstrip().endswith("}")
