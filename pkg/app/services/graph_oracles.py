"""Exact combinatorial answers used as labels and test oracles."""

import networkx as nx

from app.models.errors import VertexOutOfRangeError
from app.models.graph import Graph


def _check_vertex(g: Graph, v: int) -> None:
    if v not in g.vertices:
        raise VertexOutOfRangeError(f"Vertex {v} is not in the graph.")


def has_cycle(g: Graph) -> bool:
    # A forest has exactly n - c edges
    components = nx.number_connected_components(g.to_networkx())
    return len(g.edges) > g.n - components


def count_triangles(g: Graph) -> int:
    return sum(nx.triangles(g.to_networkx()).values()) // 3


def degree(g: Graph, v: int) -> int:
    _check_vertex(g, v)
    return sum(1 for edge in g.edges if v in edge)


def connected_components(g: Graph) -> int:
    return nx.number_connected_components(g.to_networkx())


def neighborhood_subgraph(g: Graph, v: int) -> Graph:
    """Induced subgraph on {v} and its neighbors, keeping the original labels."""
    _check_vertex(g, v)
    keep = {v, *g.neighbors(v)}
    edges = tuple(edge for edge in g.edges if edge[0] in keep and edge[1] in keep)
    return Graph(tuple(sorted(keep)), edges)


def relabel(g: Graph) -> Graph:
    """Map the sorted vertex labels of g onto 1..n."""
    mapping = {label: index for index, label in enumerate(g.vertices, start=1)}
    return Graph.from_edges(g.n, ((mapping[i], mapping[j]) for i, j in g.edges))
