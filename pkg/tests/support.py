"""Helpers shared by the test modules."""
import random

from rcforest import DynamicForest
from rcforest.generators import SHAPES, generate
from rcforest.oracle import (
    NaiveForest,
    oracle_connected,
    oracle_lca,
    oracle_path_extreme,
    oracle_path_sum,
    oracle_subtree_sum,
)


def random_forest(n, seed, *, shape=None, drop=0.1, vertex_weights=True, **kwargs):
    """``(forest, naive)`` for a seeded random forest with integer weights."""
    rng = random.Random(f"forest:{n}:{seed}")
    shape = shape or rng.choice(SHAPES)
    edges = generate(shape, n, seed, drop=drop)
    weights = [rng.randint(0, 9) for _ in range(n)] if vertex_weights else None
    forest = DynamicForest.from_edges(n, edges, vertex_weights=weights, **kwargs)
    return forest, NaiveForest(n, edges, weights)


def random_args(rng, nf, kind):
    """Random arguments for one query kind, or ``None`` if none exist."""
    n = nf.n
    if kind == "subtree":
        with_edges = [v for v in range(n) if nf.adj[v]]
        if not with_edges:
            return None
        r = rng.choice(with_edges)
        return r, rng.choice(sorted(nf.adj[r]))
    if kind == "conn":
        return rng.randrange(n), rng.randrange(n)
    # the remaining kinds need connected arguments: walk from a random vertex
    u = rng.randrange(n)
    comp = sorted(_component(nf, u))
    if kind == "lca":
        return rng.choice(comp), u, rng.choice(comp)
    if kind in ("pmax", "pmin"):
        if len(comp) == 1:
            return None
        v = rng.choice([x for x in comp if x != u])
        return u, v
    return u, rng.choice(comp)


def _component(nf, u):
    seen, stack = {u}, [u]
    while stack:
        x = stack.pop()
        for y in nf.adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


KINDS = ("conn", "subtree", "psum", "pmax", "pmin", "lca")


def answer(forest, kind, args):
    return {
        "conn": forest.connected, "subtree": forest.subtree_sum, "psum": forest.path_sum,
        "pmax": forest.path_max_edge, "pmin": forest.path_min_edge, "lca": forest.lca,
    }[kind](*args)


def oracle_answer(nf, kind, args):
    if kind == "conn":
        return oracle_connected(nf, *args)
    if kind == "subtree":
        return oracle_subtree_sum(nf, *args)
    if kind == "psum":
        return oracle_path_sum(nf, *args)
    if kind == "pmax":
        return oracle_path_extreme(nf, *args, mode="max")
    if kind == "pmin":
        return oracle_path_extreme(nf, *args, mode="min")
    return oracle_lca(nf, *args)


def oracle_mismatches(forest, nf, rng, per_kind):
    """Queries (``kind``, ``args``, got, expected) on which ``forest`` and ``nf`` disagree."""
    bad = []
    for kind in KINDS:
        for _ in range(per_kind):
            args = random_args(rng, nf, kind)
            if args is None:
                continue
            got, want = answer(forest, kind, args), oracle_answer(nf, kind, args)
            if got != want:
                bad.append((kind, args, got, want))
    return bad


def forest_mismatches(a, b, nf, rng, per_kind):
    """Queries on which two forests over the same edges disagree."""
    bad = []
    for kind in KINDS:
        for _ in range(per_kind):
            args = random_args(rng, nf, kind)
            if args is None:
                continue
            x, y = answer(a, kind, args), answer(b, kind, args)
            if x != y:
                bad.append((kind, args, x, y))
    return bad
