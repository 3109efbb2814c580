"""Brute-force reference implementations.

Nothing here imports the contraction or RC-Tree code: these answers are
computed straight from an adjacency map so that they can vouch for the fast
implementation.  Every query is linear in the forest size.
"""
from collections import deque


class OracleError(Exception):
    pass


class NaiveForest:
    """Adjacency sets plus a weight per edge and per vertex."""

    def __init__(self, n, edges=(), vertex_weights=None):
        self.n = n
        self.adj = {v: set() for v in range(n)}
        self.weight = {}
        self.vertex_weight = list(vertex_weights) if vertex_weights is not None else [0] * n
        for u, v, *w in edges:
            self.add(u, v, w[0] if w else 1)

    @staticmethod
    def key(u, v):
        return (u, v) if u < v else (v, u)

    def add(self, u, v, w=1):
        e = self.key(u, v)
        if e in self.weight or u == v:
            raise OracleError(f"bad insertion {e}")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.weight[e] = w

    def remove(self, u, v):
        e = self.key(u, v)
        if e not in self.weight:
            raise OracleError(f"bad deletion {e}")
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        del self.weight[e]

    def apply(self, insertions=(), deletions=()):
        """Mirror a batch: ``insertions`` as ``((u, v), w)``, ``deletions`` as ``(u, v)``."""
        for u, v in deletions:
            self.remove(u, v)
        for (u, v), w in insertions:
            self.add(u, v, w)

    def is_forest(self):
        return len(self.weight) == self.n - len(components(self))


def _bfs_parents(nf, src):
    parent = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in sorted(nf.adj[x]):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return parent


def components(nf):
    seen, comps = set(), []
    for v in range(nf.n):
        if v not in seen:
            comp = set(_bfs_parents(nf, v))
            seen |= comp
            comps.append(comp)
    return comps


def oracle_connected(nf, u, v):
    return u == v or v in _bfs_parents(nf, u)


def oracle_path(nf, u, v):
    """Edges of the unique ``u``-``v`` path, in order from ``u``."""
    parent = _bfs_parents(nf, u)
    if v not in parent:
        raise OracleError(f"{u} and {v} are not connected")
    path, x = [], v
    while parent[x] is not None:
        path.append(nf.key(x, parent[x]))
        x = parent[x]
    return path[::-1]


def oracle_path_vertices(nf, u, v):
    verts = [u]
    for a, b in oracle_path(nf, u, v):
        verts.append(b if verts[-1] == a else a)
    return verts


def oracle_subtree(nf, r, c):
    """``(vertices, edges)`` on ``c``'s side of the edge ``r-c``, the edge included."""
    if c not in nf.adj[r]:
        raise OracleError(f"{r} and {c} are not adjacent")
    verts, edges = {c}, {nf.key(r, c)}
    stack = [c]
    while stack:
        x = stack.pop()
        for y in nf.adj[x]:
            if y != r and y not in verts:
                verts.add(y)
                edges.add(nf.key(x, y))
                stack.append(y)
    return verts, edges


def oracle_subtree_sum(nf, r, c):
    verts, edges = oracle_subtree(nf, r, c)
    return sum(nf.vertex_weight[x] for x in verts) + sum(nf.weight[e] for e in edges)


def oracle_component_total(nf, v):
    comp = set(_bfs_parents(nf, v))
    return (sum(nf.vertex_weight[x] for x in comp)
            + sum(w for e, w in nf.weight.items() if e[0] in comp))


def oracle_path_sum(nf, u, v, include_endpoints=False):
    verts = oracle_path_vertices(nf, u, v)
    inner = verts[1:-1] if not include_endpoints else (verts if u != v else [u])
    return sum(nf.weight[e] for e in oracle_path(nf, u, v)) + sum(nf.vertex_weight[x] for x in inner)


def oracle_path_extreme(nf, u, v, mode="max"):
    path = oracle_path(nf, u, v)
    if not path:
        raise OracleError("empty path")
    if mode == "max":
        best = min(path, key=lambda e: (-nf.weight[e], e))
    else:
        best = min(path, key=lambda e: (nf.weight[e], e))
    return best, nf.weight[best]


def oracle_lca(nf, r, u, v):
    """Deepest common vertex of the ``r``-``u`` and ``r``-``v`` paths."""
    pu = oracle_path_vertices(nf, r, u)
    pv = oracle_path_vertices(nf, r, v)
    best = r
    for a, b in zip(pu, pv):
        if a != b:
            break
        best = a
    return best


def oracle_mis_check(nbrs, chosen):
    """Is ``chosen`` an independent and maximal set of the graph ``nbrs``?

    ``nbrs`` maps each vertex to its neighbours.
    """
    chosen = set(chosen)
    if not chosen <= set(nbrs):
        return False
    for v in chosen:
        if any(u in chosen for u in nbrs[v]):
            return False
    for v, ns in nbrs.items():
        if v not in chosen and not any(u in chosen for u in ns):
            return False
    return True


def uf_components(n, edges):
    """Component label of each vertex via union-find (second connectivity oracle)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, *_ in edges:
        parent[find(u)] = find(v)
    return [find(x) for x in range(n)]
