from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from app.models.errors import (
    AttributeLengthError,
    DuplicateEdgeError,
    DuplicateMemberError,
    EmptyInputError,
    InvalidParameterError,
    SelfLoopError,
    VertexOutOfRangeError,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph over 1-based vertex labels.

    `vertices` is the sorted label set; for an ordinary graph it is 1..n, for an
    induced subgraph it keeps the labels of the parent graph. `edges` holds each
    edge once as (i, j) with i < j, sorted.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not self.vertices:
            raise EmptyInputError("A graph needs at least one vertex.")
        if any(v < 1 for v in self.vertices):
            raise VertexOutOfRangeError("Vertex labels are 1-based.")
        if tuple(sorted(set(self.vertices))) != tuple(self.vertices):
            raise InvalidParameterError("Vertex labels must be sorted and unique.")
        members = set(self.vertices)
        for i, j in self.edges:
            if i == j:
                raise SelfLoopError(f"Self-loop at vertex {i}.")
            if i > j:
                raise InvalidParameterError(f"Edge ({i}, {j}) is not canonical (i < j).")
            if i not in members or j not in members:
                raise VertexOutOfRangeError(f"Edge ({i}, {j}) leaves the vertex set.")
        if len(set(self.edges)) != len(self.edges):
            raise DuplicateEdgeError("Duplicate edges in graph.")
        if list(self.edges) != sorted(self.edges):
            raise InvalidParameterError("Edges must be sorted.")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """
        Build a graph on vertices 1..n, canonicalizing every edge to i < j.

        Raises on self-loops, out-of-range endpoints and duplicates (including
        the same edge written in both directions).
        """
        if n < 1:
            raise InvalidParameterError(f"Vertex count must be >= 1, got {n}.")
        canonical = []
        seen = set()
        for edge in edges:
            i, j = int(edge[0]), int(edge[1])
            if i == j:
                raise SelfLoopError(f"Self-loop at vertex {i}.")
            for v in (i, j):
                if v < 1 or v > n:
                    raise VertexOutOfRangeError(f"Vertex {v} outside 1..{n}.")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"Duplicate edge {key}.")
            seen.add(key)
            canonical.append(key)
        return cls(tuple(range(1, n + 1)), tuple(sorted(canonical)))

    @classmethod
    def from_networkx(cls, nx_graph) -> "Graph":
        """Convert a networkx graph whose nodes are 0..n-1 into a 1-based Graph."""
        n = nx_graph.number_of_nodes()
        return cls.from_edges(n, ((u + 1, v + 1) for u, v in nx_graph.edges()))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        found = [j for i, j in self.edges if i == v] + [i for i, j in self.edges if j == v]
        return tuple(sorted(found))

    def to_networkx(self):
        import networkx as nx

        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(self.vertices)
        nx_graph.add_edges_from(self.edges)
        return nx_graph


@dataclass(frozen=True)
class AttributedGraph:
    """A graph with one attribute key per vertex (attrs[k] belongs to vertex k + 1)."""

    graph: Graph
    attrs: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.attrs) != self.graph.n:
            raise AttributeLengthError(
                f"Expected {self.graph.n} attributes, got {len(self.attrs)}."
            )

    @property
    def n(self) -> int:
        return self.graph.n

    def attribute_of(self, v: int) -> str:
        return self.attrs[self.graph.vertices.index(v)]


@dataclass(frozen=True)
class HyperGraph:
    """
    Hypergraph on vertices 1..n with an ordered list of hyperedges.

    Hyperedge order is significant: hyperedge k is keyed by the k-th edge-id
    vector of the codebook. Members inside a hyperedge are stored sorted.
    """

    n: int
    hyperedges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError(f"Vertex count must be >= 1, got {self.n}.")
        for index, members in enumerate(self.hyperedges, start=1):
            if not members:
                raise EmptyInputError(f"Hyperedge {index} has no members.")
            if len(set(members)) != len(members):
                raise DuplicateMemberError(f"Hyperedge {index} repeats a member.")
            for v in members:
                if v < 1 or v > self.n:
                    raise VertexOutOfRangeError(
                        f"Hyperedge {index} member {v} outside 1..{self.n}."
                    )

    @classmethod
    def from_lists(cls, n: int, hyperedges: Iterable[Iterable[int]]) -> "HyperGraph":
        normalized = []
        for members in hyperedges:
            members = [int(v) for v in members]
            if len(set(members)) != len(members):
                raise DuplicateMemberError(f"Hyperedge {members} repeats a member.")
            normalized.append(tuple(sorted(members)))
        return cls(n, tuple(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.hyperedges)
