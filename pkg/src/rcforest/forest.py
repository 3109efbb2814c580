"""Vertex universe, degree bound, batch edits and their validation.

Also home of the plain-text forest and batch file formats::

    forest file         batch file
    -----------         ----------
    n t                 + u v [w]
    u v [w]             - u v
    ...                 ...

Blank lines and lines starting with ``#`` are ignored in both.
"""
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    CycleError,
    DegreeOverflow,
    DuplicateEdge,
    ForestError,
    InvalidVertex,
    MissingEdge,
    ValidationError,
)

DEFAULT_WEIGHT = 1


@dataclass(frozen=True)
class ForestConfig:
    n: int
    t: int = 3

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"vertex count must be >= 0, got {self.n}")
        if self.t < 3:
            raise ValueError(f"degree bound must be >= 3, got {self.t}")


def edge_id(u, v, n=None):
    """Canonical ``(min, max)`` identity of the undirected edge ``u-v``."""
    if n is not None:
        for x in (u, v):
            if not 0 <= x < n:
                raise InvalidVertex(x, n)
    if u == v:
        raise ValidationError(f"self-loop at vertex {u}", vertex=u)
    return (u, v) if u < v else (v, u)


@dataclass
class BatchEdit:
    """A raw batch of edge insertions (with optional weights) and deletions.

    ``lines`` optionally maps an edge to the source line it came from, so that
    validation errors can be reported against a batch file.
    """

    insertions: list = field(default_factory=list)
    deletions: list = field(default_factory=list)
    lines: dict = field(default_factory=dict)

    @classmethod
    def build(cls, insert=(), delete=()):
        ins = []
        for item in insert:
            u, v, *w = item
            ins.append((edge_id(u, v), w[0] if w else DEFAULT_WEIGHT))
        return cls(ins, [edge_id(u, v) for u, v in delete])

    def __len__(self):
        return len(self.insertions) + len(self.deletions)


@dataclass(frozen=True)
class ValidatedEdit:
    """An edit that is known to keep the forest simple, acyclic and degree-bounded."""

    insertions: dict  # EdgeId -> weight, in sorted edge order
    deletions: tuple  # sorted EdgeIds

    @property
    def k(self):
        return len(self.insertions) + len(self.deletions)

    @property
    def endpoints(self):
        return sorted({x for e in (*self.insertions, *self.deletions) for x in e})


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def validate_batch(handle, edit: BatchEdit) -> ValidatedEdit:
    """Check ``edit`` against the current forest of ``handle``; all or nothing."""
    n, t = handle.n, handle.t
    edges = handle.edges
    ins, dels = {}, set()
    for e, w in edit.insertions:
        e = edge_id(*e, n=n)
        if e in ins:
            raise DuplicateEdge(e, "inserted twice")
        ins[e] = w
    for e in edit.deletions:
        e = edge_id(*e, n=n)
        if e in dels:
            raise DuplicateEdge(e, "deleted twice")
        dels.add(e)
    for e in sorted(ins):
        if e in dels:
            raise DuplicateEdge(e, "both inserted and deleted")
        if e in edges:
            raise DuplicateEdge(e, "already present")
    for e in sorted(dels):
        if e not in edges:
            raise MissingEdge(e)

    delta = {}
    for e in dels:
        for x in e:
            delta[x] = delta.get(x, 0) - 1
    for e in ins:
        for x in e:
            delta[x] = delta.get(x, 0) + 1
    for x in sorted(delta):
        d = handle.degree(x, 0) + delta[x]
        if d > t:
            raise DegreeOverflow(x, d, t)

    if ins:
        label = _component_labels(handle, {x for e in ins for x in e}, dels)
        uf = _UnionFind()
        for e in sorted(ins):
            if not uf.union(label[e[0]], label[e[1]]):
                raise CycleError(e)
    return ValidatedEdit(dict(sorted(ins.items())), tuple(sorted(dels)))


def _component_labels(handle, vertices, deleted):
    """Label each vertex with its component in the forest minus ``deleted``.

    Components untouched by deletions are labelled by their RC-Tree root, which
    costs one climb per vertex.  Components that lose edges are relabelled by a
    traversal that avoids the deleted edges.
    """
    split_roots = {handle.root_of(x) for e in deleted for x in e}
    label = {}
    for x in sorted(vertices):
        if x in label:
            continue
        root = handle.root_of(x)
        if root not in split_roots:
            label[x] = ("root", root)
            continue
        stack, seen = [x], {x}
        while stack:
            y = stack.pop()
            for z in handle.neighbors(y):
                if z not in seen and edge_id(y, z) not in deleted:
                    seen.add(z)
                    stack.append(z)
        for y in seen:
            if y in vertices:
                label[y] = ("split", x)
    return label


# -- file formats -----------------------------------------------------------

def _number(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


class ParseError(ForestError, ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def parse_forest(text):
    """Return ``(n, t, [(u, v, w), ...])`` from forest-file text."""
    lines = _content_lines(text)
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ParseError(1, "missing 'n t' header") from None
    if len(head) != 2:
        raise ParseError(lineno, "header must be 'n t'")
    n, t = int(head[0]), int(head[1])
    edges = []
    for lineno, parts in lines:
        if len(parts) not in (2, 3):
            raise ParseError(lineno, "edge line must be 'u v [w]'")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = _number(parts[2]) if len(parts) == 3 else DEFAULT_WEIGHT
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        edges.append((u, v, w))
    return n, t, edges


def format_forest(n, t, edges):
    out = [f"{n} {t}"]
    for u, v, w in edges:
        out.append(f"{u} {v} {w}")
    return "\n".join(out) + "\n"


def parse_batch(text) -> BatchEdit:
    edit = BatchEdit()
    for lineno, parts in _content_lines(text):
        op = parts[0]
        try:
            if op == "+" and len(parts) in (3, 4):
                e = edge_id(int(parts[1]), int(parts[2]))
                w = _number(parts[3]) if len(parts) == 4 else DEFAULT_WEIGHT
                edit.insertions.append((e, w))
            elif op == "-" and len(parts) == 3:
                e = edge_id(int(parts[1]), int(parts[2]))
                edit.deletions.append(e)
            else:
                raise ParseError(lineno, "expected '+ u v [w]' or '- u v'")
        except ValidationError as exc:
            raise ParseError(lineno, str(exc)) from None
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(lineno, str(exc)) from None
        edit.lines.setdefault(e, lineno)
    return edit


def format_batch(edit: BatchEdit):
    out = [f"- {u} {v}" for u, v in edit.deletions]
    out += [f"+ {u} {v} {w}" for (u, v), w in edit.insertions]
    return "\n".join(out) + ("\n" if out else "")


def error_line(edit: BatchEdit, exc: ValidationError) -> Optional[int]:
    if exc.edge is not None:
        return edit.lines.get(exc.edge)
    if exc.vertex is not None:
        hits = [ln for e, ln in edit.lines.items() if exc.vertex in e]
        return min(hits) if hits else None
    return None
