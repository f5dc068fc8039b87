"""Quivers, labels and the doubling construction.

Vertex and edge identifiers are strings. Internal indices follow declaration
order, which fixes the layout of every matrix built downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

REVERSE_PREFIX = "-"


class ValidationError(ValueError):
    """Raised when quiver/label data is malformed. ``issues`` holds the report."""

    def __init__(self, issues: Sequence["Issue"]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues) or "invalid input")


@dataclass(frozen=True)
class Issue:
    kind: str  # dangling-edge | duplicate-id | length-mismatch | bad-rank | empty-id | bad-degree
    subject: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.kind}: {self.subject}" + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


def reverse_edge(edge: Edge) -> Edge:
    """Opposite orientation; applying it twice gives back the original edge."""
    if edge.id.startswith(REVERSE_PREFIX):
        new_id = edge.id[len(REVERSE_PREFIX):]
    else:
        new_id = REVERSE_PREFIX + edge.id
    return Edge(new_id, edge.head, edge.tail)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    _vindex: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_vindex", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges))

    def index(self, vertex: str) -> int:
        return self._vindex[vertex]

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def incoming(self, vertex: str) -> list[Edge]:
        return [e for e in self.edges if e.head == vertex]

    def outgoing(self, vertex: str) -> list[Edge]:
        return [e for e in self.edges if e.tail == vertex]

    def relabel(self, mapping: Mapping[str, str]) -> "Quiver":
        return Quiver(
            tuple(mapping[v] for v in self.vertices),
            tuple(Edge(e.id, mapping[e.tail], mapping[e.head]) for e in self.edges),
        )


@dataclass(frozen=True)
class Label:
    """Per-vertex rank and degree, in the quiver's vertex order."""

    rank: tuple[int, ...]
    degree: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rank", tuple(int(r) for r in self.rank))
        deg = self.degree if len(self.degree) else (0,) * len(self.rank)
        object.__setattr__(self, "degree", tuple(int(d) for d in deg))

    def rank_of(self, q: Quiver, vertex: str) -> int:
        return self.rank[q.index(vertex)]


@dataclass(frozen=True)
class DoubleQuiver:
    base: Quiver
    reversed_edges: tuple[tuple[Edge, Edge], ...]

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.base.vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(a for a, _ in self.reversed_edges) + tuple(b for _, b in self.reversed_edges)

    def as_quiver(self) -> Quiver:
        return Quiver(self.base.vertices, self.edges)


def validate(q: Quiver, label: Label | None = None) -> list[Issue]:
    """Return every problem found in ``q`` (and ``label``); empty means valid."""
    issues: list[Issue] = []
    seen: set[str] = set()
    for v in q.vertices:
        if v in seen:
            issues.append(Issue("duplicate-id", v, "vertex"))
        seen.add(v)
    vset = set(q.vertices)
    eids: set[str] = set()
    for e in q.edges:
        if not e.id:
            issues.append(Issue("empty-id", repr(e)))
        if e.id in eids:
            issues.append(Issue("duplicate-id", e.id, "edge"))
        eids.add(e.id)
        for end in ("tail", "head"):
            if getattr(e, end) not in vset:
                issues.append(Issue("dangling-edge", e.id, f"{end} {getattr(e, end)!r} is not a vertex"))
    if label is not None:
        n = len(q.vertices)
        if len(label.rank) != n:
            issues.append(Issue("length-mismatch", "rank", f"expected {n}, got {len(label.rank)}"))
        if len(label.degree) != n:
            issues.append(Issue("length-mismatch", "degree", f"expected {n}, got {len(label.degree)}"))
        for v, r in zip(q.vertices, label.rank):
            if r < 1:
                issues.append(Issue("bad-rank", v, f"rank {r} < 1"))
    return issues


def require_valid(q: Quiver, label: Label | None = None) -> None:
    issues = validate(q, label)
    if issues:
        raise ValidationError(issues)


def double(q: Quiver) -> DoubleQuiver:
    require_valid(q)
    return DoubleQuiver(q, tuple((e, reverse_edge(e)) for e in q.edges))


def rep_space_dimension(q: Quiver, label: Label) -> int:
    """Real dimension of the space of (x, y) pairs over a point."""
    require_valid(q, label)
    r = {v: label.rank[i] for i, v in enumerate(q.vertices)}
    return 2 * sum(2 * r[e.head] * r[e.tail] for e in q.edges)


# Standard examples used throughout the tests and CLI.

def point_quiver() -> Quiver:
    return Quiver(("1",))


def jordan_quiver() -> Quiver:
    return Quiver.from_edges(["1"], [("a", "1", "1")])


def a2_quiver() -> Quiver:
    return Quiver.from_edges(["1", "2"], [("a", "1", "2")])


def star_quiver(arms: int = 2) -> Quiver:
    """Center "0" with ``arms`` incoming edges; three vertices by default."""
    verts = ["0"] + [str(i) for i in range(1, arms + 1)]
    return Quiver.from_edges(verts, [(f"a{i}", str(i), "0") for i in range(1, arms + 1)])
