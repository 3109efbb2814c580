"""Seeded forest and batch generators.

Every generator is a pure function of its arguments: the same
``(shape, n, seed)`` always yields the same edge list.
"""
import random

SHAPES = ("path", "star-capped-at-t", "random-ternary", "caterpillar")


def path(n, rng=None, t=3):
    return [(i, i + 1) for i in range(n - 1)]


def star_capped(n, rng=None, t=3):
    """A centre with ``t`` arms; the arms are paths of near-equal length."""
    if n <= 1:
        return []
    edges = []
    arm_end = [0] * t
    for v in range(1, n):
        a = (v - 1) % t
        edges.append((arm_end[a], v))
        arm_end[a] = v
    return edges


def random_ternary(n, rng, t=3):
    """Attach each vertex to a uniformly random earlier vertex with spare degree."""
    edges = []
    open_ = [0] if n else []
    deg = [0] * n
    for v in range(1, n):
        i = rng.randrange(len(open_))
        u = open_[i]
        edges.append((u, v))
        deg[u] += 1
        deg[v] = 1
        if deg[u] == t:
            open_[i] = open_[-1]
            open_.pop()
        open_.append(v)
    return edges


def caterpillar(n, rng=None, t=3):
    """A spine with one leg per spine vertex (spine of about ``n / 2``)."""
    spine = (n + 1) // 2
    edges = [(i, i + 1) for i in range(spine - 1)]
    edges += [(i, spine + i) for i in range(n - spine)]
    return edges


_BUILDERS = {"path": path, "star-capped-at-t": star_capped,
             "random-ternary": random_ternary, "caterpillar": caterpillar}


def generate(shape, n, seed=0, t=3, *, max_weight=100, drop=0.0):
    """Edges ``(u, v, w)`` of a generated forest.

    Vertex ids are shuffled so that shape and id order are unrelated, and with
    ``drop > 0`` that fraction of edges is removed to give several trees.
    """
    if shape not in _BUILDERS:
        raise ValueError(f"unknown shape {shape!r}; choose from {', '.join(SHAPES)}")
    rng = random.Random(f"{shape}:{n}:{seed}")
    edges = _BUILDERS[shape](n, rng, t)
    perm = list(range(n))
    if shape == "random-ternary":
        rng.shuffle(perm)
    out = []
    for u, v in edges:
        if drop and rng.random() < drop:
            continue
        out.append((perm[u], perm[v], rng.randint(1, max_weight)))
    return out


def parse_gen(text):
    """``"shape:n:seed"`` to ``(shape, n, seed)``."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"generator must be given as shape:n[:seed], got {text!r}")
    shape, n = parts[0], int(parts[1])
    seed = int(parts[2]) if len(parts) == 3 else 0
    if shape not in _BUILDERS:
        raise ValueError(f"unknown shape {shape!r}; choose from {', '.join(SHAPES)}")
    return shape, n, seed


def random_batch(n, edges, k, rng, t=3, *, max_weight=100, insert_fraction=0.5):
    """A valid batch of ``k`` edits against the forest ``edges`` (fewer only
    when the forest runs out of edges to delete).

    Returns ``(insertions, deletions)`` with insertions as ``((u, v), w)`` and
    deletions as ``(u, v)``.  Deletions are drawn first; insertions then join
    distinct trees of the forest minus the deletions while respecting the
    degree bound, so the batch always validates.
    """
    present = {(min(u, v), max(u, v)) for u, v, *_ in edges}
    n_del = min(len(present), sum(rng.random() >= insert_fraction for _ in range(k)))
    deletions = rng.sample(sorted(present), n_del)
    remaining = present.difference(deletions)

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = [0] * n
    for u, v in remaining:
        parent[find(u)] = find(v)
        deg[u] += 1
        deg[v] += 1
    insertions = []
    tries = 0
    while len(insertions) + len(deletions) < k and tries < 50 * k and n > 1:
        tries += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or deg[u] >= t or deg[v] >= t or find(u) == find(v):
            continue
        if (min(u, v), max(u, v)) in present:
            continue
        parent[find(u)] = find(v)
        deg[u] += 1
        deg[v] += 1
        insertions.append(((min(u, v), max(u, v)), rng.randint(1, max_weight)))
    # a forest that is one big tree leaves no room for insertions: top up
    # with deletions, which can never invalidate the batch
    spare = sorted(remaining)
    rng.shuffle(spare)
    while len(insertions) + len(deletions) < k and spare:
        deletions.append(spare.pop())
    return insertions, deletions
