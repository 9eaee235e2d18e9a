"""
Synthetic graph and hypergraph families.

Graph families delegate to networkx with an integer seed; hypergraph families
draw from a numpy generator. Every generator is a pure function of its
parameters and seed.
"""

import logging
from typing import Sequence

import networkx as nx
import numpy as np

from app.models.errors import DegenerateInputError, InvalidParameterError
from app.models.graph import Graph, HyperGraph

logger = logging.getLogger(__name__)


def _check_probability(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {p}.")


def _check_count(name: str, value: int, minimum: int = 1) -> None:
    if int(value) != value or value < minimum:
        raise InvalidParameterError(f"{name} must be an integer >= {minimum}, got {value}.")


def gen_er(n: int, p: float, seed: int) -> Graph:
    _check_count("n", n)
    _check_probability("p", p)
    return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=seed))


def gen_ba(n: int, m: int, seed: int) -> Graph:
    _check_count("m", m)
    if n <= m:
        raise InvalidParameterError(f"Barabasi-Albert needs n > m, got n={n}, m={m}.")
    return Graph.from_networkx(nx.barabasi_albert_graph(n, m, seed=seed))


def gen_sbm(sizes: Sequence[int], p_in: float, p_out: float, seed: int) -> Graph:
    if not sizes or any(int(size) != size or size < 1 for size in sizes):
        raise InvalidParameterError(f"Block sizes must be positive integers, got {sizes}.")
    _check_probability("p_in", p_in)
    _check_probability("p_out", p_out)
    blocks = len(sizes)
    probabilities = [[p_in if a == b else p_out for b in range(blocks)] for a in range(blocks)]
    sbm = nx.stochastic_block_model(list(sizes), probabilities, seed=seed)
    return Graph.from_networkx(nx.convert_node_labels_to_integers(sbm))


def gen_star(n: int) -> Graph:
    """Star on n vertices with vertex 1 as the center."""
    _check_count("n", n)
    return Graph.from_networkx(nx.star_graph(n - 1))


def gen_path(n: int) -> Graph:
    _check_count("n", n)
    return Graph.from_networkx(nx.path_graph(n))


def gen_complete(n: int) -> Graph:
    _check_count("n", n)
    return Graph.from_networkx(nx.complete_graph(n))


def gen_tree(n: int, extra_edges: int, seed: int) -> Graph:
    """
    Uniform random labeled tree on n vertices (via a Pruefer sequence) plus
    `extra_edges` distinct chords. With extra_edges=0 the graph is acyclic and
    connected; every chord closes at least one cycle.
    """
    _check_count("n", n)
    _check_count("extra_edges", extra_edges, minimum=0)
    max_chords = n * (n - 1) // 2 - (n - 1)
    if extra_edges > max_chords:
        raise InvalidParameterError(f"At most {max_chords} chords fit on {n} vertices.")
    rng = np.random.default_rng(seed)
    if n == 1:
        return Graph.from_edges(1, [])
    if n == 2:
        tree = nx.path_graph(2)
    else:
        tree = nx.from_prufer_sequence(rng.integers(0, n, size=n - 2).tolist())
    edges = {(min(u, v), max(u, v)) for u, v in tree.edges()}
    candidates = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if extra_edges:
        chosen = rng.choice(len(candidates), size=extra_edges, replace=False)
        edges.update(candidates[k] for k in chosen)
    return Graph.from_edges(n, ((u + 1, v + 1) for u, v in edges))


MAX_REJECTIONS = 64


def _bernoulli_edge(rng: np.random.Generator, probabilities: np.ndarray) -> tuple[int, ...]:
    """Independent vertex inclusions, conditioned on a non-empty hyperedge."""
    for _ in range(MAX_REJECTIONS):
        members = np.flatnonzero(rng.random(probabilities.shape[0]) < probabilities)
        if members.size:
            return tuple(int(v) + 1 for v in members)
    # Sparse rows: draw the lowest member directly, then the rest independently
    absent_before = np.cumprod(np.concatenate(([1.0], 1.0 - probabilities[:-1])))
    first_weights = probabilities * absent_before
    total = float(first_weights.sum())
    if not total > 0.0:
        raise DegenerateInputError("Every inclusion probability is zero; no hyperedge can be drawn.")
    first = int(rng.choice(probabilities.shape[0], p=first_weights / total))
    later = first + 1 + np.flatnonzero(rng.random(probabilities.shape[0] - first - 1) < probabilities[first + 1:])
    return (first + 1,) + tuple(int(v) + 1 for v in later)


def gen_hyper_er(n: int, m: int, k_mean: float, seed: int) -> HyperGraph:
    """
    Hypergraph Erdos-Renyi: each of m hyperedges contains each vertex
    independently with probability k_mean / n; empty hyperedges are redrawn.
    """
    _check_count("n", n)
    _check_count("m", m)
    if not 0.0 < k_mean <= n:
        raise InvalidParameterError(f"k_mean must lie in (0, n], got {k_mean}.")
    rng = np.random.default_rng(seed)
    probabilities = np.full(n, k_mean / n)
    return HyperGraph(n, tuple(_bernoulli_edge(rng, probabilities) for _ in range(m)))


def gen_chung_lu(n: int, degree_sequence: Sequence[float], seed: int, edge_size: float = 3.0) -> HyperGraph:
    """
    Chung-Lu hypergraph: m = round(sum(degrees) / edge_size) hyperedges, each
    including vertex v with probability min(1, edge_size * w_v / sum(w)), so the
    expected degree of v is w_v whenever no probability saturates.
    """
    _check_count("n", n)
    weights = np.asarray(degree_sequence, dtype=np.float64)
    if weights.shape != (n,):
        raise InvalidParameterError(f"Expected {n} degrees, got {weights.shape[0]}.")
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise InvalidParameterError("Degrees must be finite and nonnegative.")
    volume = float(weights.sum())
    if volume == 0.0:
        raise DegenerateInputError("Degree sequence is all zero; no hyperedge can be drawn.")
    if edge_size <= 0:
        raise InvalidParameterError(f"edge_size must be positive, got {edge_size}.")
    m = max(1, int(round(volume / edge_size)))
    probabilities = np.minimum(1.0, edge_size * weights / volume)
    rng = np.random.default_rng(seed)
    hypergraph = HyperGraph(n, tuple(_bernoulli_edge(rng, probabilities) for _ in range(m)))
    logger.debug("Chung-Lu hypergraph: n=%d, m=%d", n, m)
    return hypergraph
