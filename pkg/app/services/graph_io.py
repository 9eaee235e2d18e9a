"""
Readers and writers for the graph file formats.

- Edge list: first line "n=<int>", then one "i j" pair per line. Blank lines and
  lines starting with '#' are ignored.
- Graph JSON: {"n": int, "edges": [[i, j], ...], "attrs": [key, ...]}.
- Hypergraph JSON: {"n": int, "hyperedges": [[v, ...], ...]}.
"""

import logging
from typing import Optional, Union

from pydantic import ValidationError

from app.models.documents import GraphDocument, HypergraphDocument
from app.models.errors import MalformedDocumentError, MalformedRowError
from app.models.graph import AttributedGraph, Graph, HyperGraph
from app.utils.json_utils import JsonUtils

logger = logging.getLogger(__name__)


def parse_edge_list(path: str, n: Optional[int] = None) -> Graph:
    """
    Parse an edge-list file.

    The "n=<int>" header is required unless `n` is passed explicitly; when both
    are present they must agree.
    """
    with open(path, "r", encoding="utf-8") as file:
        lines = [(number, line.strip()) for number, line in enumerate(file, start=1)]
    lines = [(number, line) for number, line in lines if line and not line.startswith("#")]

    declared = None
    if lines and lines[0][1].startswith("n="):
        try:
            declared = int(lines[0][1][2:])
        except ValueError:
            raise MalformedRowError(f"{path}:{lines[0][0]}: invalid header {lines[0][1]!r}.")
        lines = lines[1:]
    if declared is None and n is None:
        raise MalformedRowError(f"{path}: missing 'n=<int>' header.")
    if declared is not None and n is not None and declared != n:
        raise MalformedRowError(f"{path}: header declares n={declared}, caller expects n={n}.")
    vertex_count = declared if declared is not None else n

    edges = []
    for number, line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise MalformedRowError(f"{path}:{number}: expected 'i j', got {line!r}.")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise MalformedRowError(f"{path}:{number}: non-integer vertex in {line!r}.")

    graph = Graph.from_edges(vertex_count, edges)
    logger.debug("Parsed edge list %s: n=%d, %d edges", path, graph.n, len(graph.edges))
    return graph


def write_edge_list(graph: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as file:
        file.write(f"n={graph.n}\n")
        for i, j in graph.edges:
            file.write(f"{i} {j}\n")


def _validated(model, data, path: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise MalformedDocumentError(f"{path}: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}")


def parse_graph_json(path: str) -> Union[AttributedGraph, Graph]:
    """
    Parse a graph JSON file.

    Returns an AttributedGraph when "attrs" is present, else a plain Graph.
    """
    document = _validated(GraphDocument, JsonUtils.load_json_file(path), path)
    graph = Graph.from_edges(document.n, document.edges)
    if document.attrs is None:
        return graph
    return AttributedGraph(graph, tuple(document.attrs))


def write_graph_json(graph: Union[AttributedGraph, Graph], path: str) -> None:
    base = graph.graph if isinstance(graph, AttributedGraph) else graph
    document = GraphDocument(
        n=base.n,
        edges=[list(edge) for edge in base.edges],
        attrs=list(graph.attrs) if isinstance(graph, AttributedGraph) else None,
    )
    JsonUtils.write_json_file(document.model_dump(exclude_none=True), path)


def parse_hypergraph_json(path: str) -> HyperGraph:
    document = _validated(HypergraphDocument, JsonUtils.load_json_file(path), path)
    return HyperGraph.from_lists(document.n, document.hyperedges)


def write_hypergraph_json(hypergraph: HyperGraph, path: str) -> None:
    document = HypergraphDocument(
        n=hypergraph.n,
        hyperedges=[list(members) for members in hypergraph.hyperedges],
    )
    JsonUtils.write_json_file(document.model_dump(), path)


def load_structure(path: str):
    """Load any supported structure, choosing the parser from the file content."""
    if path.endswith(".json"):
        data = JsonUtils.load_json_file(path)
        if isinstance(data, dict) and "hyperedges" in data:
            return parse_hypergraph_json(path)
        return parse_graph_json(path)
    return parse_edge_list(path)
