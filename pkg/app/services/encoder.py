"""
Fock-space encodings of graphs, attributed graphs and hypergraphs.

Every structure starts from the size term s * p_n. Terms are accumulated in a
canonical order (sorted edges, then vertices, then hyperedges in list order)
so an encoding is bit-reproducible regardless of input ordering.
"""

import hashlib
import logging
import struct
from functools import reduce
from typing import Sequence

import numpy as np

from app.models.embedding import Embedding, EncodingMode
from app.models.errors import (
    BadMagicError,
    CapacityExceededError,
    DimensionMismatchError,
    EmptyInputError,
    TruncatedFileError,
    UnknownModeError,
    VersionMismatchError,
)
from app.models.graph import AttributedGraph, Graph, HyperGraph
from app.services import graph_oracles
from app.services.codebook import Codebook
from app.services.vsa_core import HyperVector, bind, bind_rows, bundle_all

logger = logging.getLogger(__name__)

UNSTABLE_PRODUCT_ARITY = 4

MAGIC = b"FGEM"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHBIQ32s")


def _check_capacity(n: int, cb: Codebook) -> None:
    if n > cb.n_max:
        raise CapacityExceededError(f"Structure has {n} vertices, codebook holds {cb.n_max}.")


def size_term(n: int, cb: Codebook) -> HyperVector:
    _check_capacity(n, cb)
    return bind(cb.size_vector, cb.node(n))


def _edge_terms(edges: Sequence[tuple[int, int]], cb: Codebook) -> np.ndarray:
    if not edges:
        return np.zeros((0, cb.dimension))
    left = cb.nodes(i for i, _ in edges)
    right = cb.nodes(j for _, j in edges)
    return bind_rows(left, right)


def _graph_terms(g: Graph, cb: Codebook) -> np.ndarray:
    _check_capacity(max(g.n, g.vertices[-1]), cb)
    return np.vstack([size_term(g.n, cb)[None, :], _edge_terms(g.edges, cb)])


def _embedding(terms: np.ndarray, mode: EncodingMode, cb: Codebook, n: int) -> Embedding:
    return Embedding(bundle_all(terms), mode, cb.fingerprint, n)


def encode_graph(g: Graph, cb: Codebook) -> Embedding:
    """g = (s * p_n) + sum over edges (i, j) of (p_i * p_j)."""
    return _embedding(_graph_terms(g, cb), EncodingMode.GRAPH, cb, g.n)


def encode_attributed(g: AttributedGraph, cb: Codebook) -> Embedding:
    """Graph encoding plus one p_i * a_i term per vertex."""
    attributes = np.stack([cb.attribute(key) for key in g.attrs])
    vertex_terms = bind_rows(cb.nodes(g.graph.vertices), attributes)
    terms = np.vstack([_graph_terms(g.graph, cb), vertex_terms])
    return _embedding(terms, EncodingMode.ATTRIBUTED, cb, g.n)


def encode_hypergraph_product(h: HyperGraph, cb: Codebook) -> Embedding:
    """
    Each hyperedge contributes the binding of all of its member vectors.

    Hyperedges are accumulated in sorted member order, so a hypergraph whose
    hyperedges all have two members encodes exactly like the matching graph.
    """
    _check_capacity(h.n, cb)
    widest = max((len(members) for members in h.hyperedges), default=0)
    if widest > UNSTABLE_PRODUCT_ARITY:
        logger.warning(
            "Binding %d vectors in one hyperedge is numerically unstable; "
            "prefer the keyed hypergraph encoding.", widest,
        )
    hyperedges = sorted(h.hyperedges)
    # Pairs go through the same batched path as graph edges
    pairs = [members for members in hyperedges if len(members) == 2]
    pair_terms = iter(_edge_terms(pairs, cb))
    terms = [size_term(h.n, cb)]
    for members in hyperedges:
        if len(members) == 1:
            terms.append(np.array(cb.node(members[0])))
        elif len(members) == 2:
            terms.append(next(pair_terms))
        else:
            terms.append(reduce(bind, (cb.node(v) for v in members)))
    return _embedding(np.stack(terms), EncodingMode.HYPER_PRODUCT, cb, h.n)


def encode_hypergraph(h: HyperGraph, cb: Codebook) -> Embedding:
    """g = (s * p_n) + sum over hyperedges k of e_k * (sum of member vectors)."""
    _check_capacity(h.n, cb)
    if h.edge_count > cb.m_max:
        raise CapacityExceededError(
            f"Hypergraph has {h.edge_count} hyperedges, codebook holds {cb.m_max} edge ids."
        )
    terms = [size_term(h.n, cb)[None, :]]
    if h.hyperedges:
        members = np.stack([cb.nodes(edge).sum(axis=0) for edge in h.hyperedges])
        terms.append(bind_rows(cb.edge_id_vectors[: h.edge_count], members))
    return _embedding(np.vstack(terms), EncodingMode.HYPER_KEYED, cb, h.n)


def encode_node_neighborhood(g: Graph, v: int, cb: Codebook, relabel: bool = False) -> Embedding:
    """
    Encode the subgraph induced by v and its neighbors.

    Edges keep their global labels unless relabel=True, in which case the
    subgraph is mapped onto 1..k first. The size term always uses k.
    """
    subgraph = graph_oracles.neighborhood_subgraph(g, v)
    if relabel:
        subgraph = graph_oracles.relabel(subgraph)
    return _embedding(_graph_terms(subgraph, cb), EncodingMode.NEIGHBORHOOD, cb, subgraph.n)


def encode_kv_pairs(pairs: Sequence[tuple[HyperVector, HyperVector]]) -> HyperVector:
    """u = sum over i of k_i * v_i."""
    if not pairs:
        raise EmptyInputError("At least one key-value pair is required.")
    keys = [np.asarray(key, dtype=np.float64) for key, _ in pairs]
    values = [np.asarray(value, dtype=np.float64) for _, value in pairs]
    shape = keys[0].shape
    if len(shape) != 1 or any(vector.shape != shape for vector in keys + values):
        raise DimensionMismatchError("Keys and values must all be vectors of one dimension.")
    return bundle_all(bind_rows(np.stack(keys), np.stack(values)))


def save_embedding(embedding: Embedding, path: str) -> None:
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        embedding.mode.code,
        embedding.d,
        embedding.n_declared,
        bytes.fromhex(embedding.codebook_fingerprint),
    )
    with open(path, "wb") as file:
        file.write(header)
        file.write(embedding.vector.astype("<f8").tobytes())
    logger.info("Saved %s embedding (d=%d) to %s", embedding.mode.value, embedding.d, path)


def load_embedding(path: str) -> Embedding:
    with open(path, "rb") as file:
        data = file.read()
    if len(data) < _HEADER.size:
        raise TruncatedFileError("Embedding file is shorter than its header.")
    magic, version, mode_code, d, n_declared, fingerprint = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"Not an embedding file (magic {magic!r}).")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"Embedding format version {version}, expected {FORMAT_VERSION}.")
    payload = data[_HEADER.size:]
    if len(payload) != d * 8:
        raise TruncatedFileError(f"Embedding payload has {len(payload)} bytes, expected {d * 8}.")
    try:
        mode = EncodingMode.from_code(mode_code)
    except ValueError as e:
        raise UnknownModeError(str(e))
    vector = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return Embedding(vector, mode, fingerprint.hex(), int(n_declared))


def embedding_digest(embedding: Embedding) -> str:
    """Content hash of an embedding vector, handy for idempotence checks."""
    return hashlib.sha256(embedding.vector.astype("<f8").tobytes()).hexdigest()
