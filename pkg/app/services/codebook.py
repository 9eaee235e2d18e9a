"""
Seeded registry of concept vectors: node vectors p_1..p_N, hyperedge-id vectors
e_1..e_M, the size marker s, and attribute vectors keyed by string.

Every vector is drawn from its own Philox stream keyed by
SeedSequence(seed, spawn_key=(role, index)), so a vector depends only on
(seed, role, index, d, unitary) and never on generation order.
"""

import csv
import hashlib
import logging
import struct
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

import numpy as np

from app.models.errors import (
    BadMagicError,
    CapacityExceededError,
    DimensionMismatchError,
    DuplicateKeyError,
    FingerprintMismatchError,
    InvalidParameterError,
    MalformedRowError,
    TruncatedFileError,
    UnknownAttributeError,
    VersionMismatchError,
)
from app.services.vsa_core import check_dimension, random_hypervector

logger = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 512
DEFAULT_MAX_EDGES = 64

ROLE_NODE = 1
ROLE_EDGE_ID = 2
ROLE_SIZE = 3
ROLE_ATTRIBUTE = 4

MAGIC = b"FGCB"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sH")
_BODY_HEADER = struct.Struct("<HIQIII")
_KEY_LENGTH = struct.Struct("<H")
_DIGEST_SIZE = 32
_FLAG_UNITARY = 0x1


def role_generator(seed: int, role: int, index: int) -> np.random.Generator:
    """Counter-based generator for one vector of one role."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(role, index))
    return np.random.Generator(np.random.Philox(sequence))


def attribute_index(key: str) -> int:
    """Stable 64-bit index for an attribute key."""
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _draw(d: int, seed: int, role: int, index: int, unitary: bool) -> np.ndarray:
    return random_hypervector(d, role_generator(seed, role, index), unitary=unitary)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Codebook:
    """
    Immutable concept-vector registry.

    Node and edge-id vectors are 1-based: node(1) is p_1, the first row of
    node_vectors.
    """

    dimension: int
    seed: int
    node_vectors: np.ndarray
    edge_id_vectors: np.ndarray
    size_vector: np.ndarray
    attribute_vectors: Mapping[str, np.ndarray] = field(default_factory=dict)
    unitary: bool = False

    @property
    def n_max(self) -> int:
        return int(self.node_vectors.shape[0])

    @property
    def m_max(self) -> int:
        return int(self.edge_id_vectors.shape[0])

    def node(self, i: int) -> np.ndarray:
        if i < 1 or i > self.n_max:
            raise CapacityExceededError(f"Node {i} outside codebook range 1..{self.n_max}.")
        return self.node_vectors[i - 1]

    def nodes(self, labels: Iterable[int]) -> np.ndarray:
        labels = list(labels)
        for i in labels:
            self.node(i)
        return self.node_vectors[np.asarray(labels, dtype=np.int64) - 1]

    def edge_id(self, k: int) -> np.ndarray:
        if k < 1 or k > self.m_max:
            raise CapacityExceededError(f"Edge id {k} outside codebook range 1..{self.m_max}.")
        return self.edge_id_vectors[k - 1]

    def attribute(self, key: str) -> np.ndarray:
        try:
            return self.attribute_vectors[key]
        except KeyError:
            raise UnknownAttributeError(f"Attribute {key!r} is not in the codebook.")

    def with_attributes(self, keys: Iterable[str]) -> "Codebook":
        """Return a codebook extended with seeded vectors for any new keys."""
        additions = {}
        for key in keys:
            if key in self.attribute_vectors or key in additions:
                continue
            additions[key] = _frozen(
                _draw(self.dimension, self.seed, ROLE_ATTRIBUTE, attribute_index(key), self.unitary)
            )
        return self.with_vectors(additions) if additions else self

    def with_vectors(self, vectors: Mapping[str, np.ndarray]) -> "Codebook":
        """Return a codebook extended with externally supplied attribute vectors."""
        merged = dict(self.attribute_vectors)
        for key, vector in vectors.items():
            if key in merged:
                raise DuplicateKeyError(f"Attribute {key!r} is already registered.")
            vector = np.asarray(vector, dtype=np.float64)
            if vector.shape != (self.dimension,):
                raise DimensionMismatchError(
                    f"Attribute {key!r} has dimension {vector.shape[-1]}, codebook has {self.dimension}."
                )
            merged[key] = _frozen(vector)
        return Codebook(
            dimension=self.dimension,
            seed=self.seed,
            node_vectors=self.node_vectors,
            edge_id_vectors=self.edge_id_vectors,
            size_vector=self.size_vector,
            attribute_vectors=MappingProxyType(merged),
            unitary=self.unitary,
        )

    def body_bytes(self) -> bytes:
        """Canonical serialization of everything except magic, version and digest."""
        flags = _FLAG_UNITARY if self.unitary else 0
        keys = sorted(self.attribute_vectors)
        parts = [
            _BODY_HEADER.pack(flags, self.dimension, self.seed, self.n_max, self.m_max, len(keys)),
            self.node_vectors.astype("<f8").tobytes(),
            self.edge_id_vectors.astype("<f8").tobytes(),
            self.size_vector.astype("<f8").tobytes(),
        ]
        for key in keys:
            encoded = key.encode("utf-8")
            parts.append(_KEY_LENGTH.pack(len(encoded)))
            parts.append(encoded)
            parts.append(self.attribute_vectors[key].astype("<f8").tobytes())
        return b"".join(parts)

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.body_bytes()).hexdigest()


def build_codebook(
    d: int,
    seed: int,
    n_max_nodes: int = DEFAULT_MAX_NODES,
    m_max_edges: int = DEFAULT_MAX_EDGES,
    *,
    unitary: bool = False,
    attributes: Iterable[str] = (),
) -> Codebook:
    """
    Draw a codebook for dimension d.

    Each role (nodes, edge ids, size marker, attributes) uses its own substream,
    so s never coincides with any p_i or e_j and growing n_max keeps the
    existing prefix bit-identical.
    """
    d = check_dimension(d)
    if n_max_nodes < 1:
        raise InvalidParameterError(f"n_max_nodes must be >= 1, got {n_max_nodes}.")
    if m_max_edges < 0:
        raise InvalidParameterError(f"m_max_edges must be >= 0, got {m_max_edges}.")
    if seed < 0 or seed >= 2**64:
        raise InvalidParameterError(f"seed must fit in an unsigned 64-bit integer, got {seed}.")

    nodes = np.stack([_draw(d, seed, ROLE_NODE, i, unitary) for i in range(1, n_max_nodes + 1)])
    if m_max_edges:
        edge_ids = np.stack([_draw(d, seed, ROLE_EDGE_ID, k, unitary) for k in range(1, m_max_edges + 1)])
    else:
        edge_ids = np.zeros((0, d), dtype=np.float64)
    size = _draw(d, seed, ROLE_SIZE, 0, unitary)

    codebook = Codebook(
        dimension=d,
        seed=seed,
        node_vectors=_frozen(nodes),
        edge_id_vectors=_frozen(edge_ids),
        size_vector=_frozen(size),
        attribute_vectors=MappingProxyType({}),
        unitary=unitary,
    )
    codebook = codebook.with_attributes(attributes)
    logger.info(
        "Built codebook d=%d seed=%d nodes=%d edge_ids=%d attributes=%d unitary=%s",
        d, seed, n_max_nodes, m_max_edges, len(codebook.attribute_vectors), unitary,
    )
    return codebook


def save(codebook: Codebook, path: str) -> str:
    """Write the codebook in the binary format; returns its fingerprint."""
    body = codebook.body_bytes()
    digest = hashlib.sha256(body).digest()
    with open(path, "wb") as file:
        file.write(_HEADER.pack(MAGIC, FORMAT_VERSION))
        file.write(body)
        file.write(digest)
    logger.info("Saved codebook %s to %s", digest.hex()[:12], path)
    return digest.hex()


class _Reader:
    def __init__(self, data: bytes, offset: int):
        self.data = data
        self.offset = offset

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self.data):
            raise TruncatedFileError(f"Codebook file truncated while reading {what}.")
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def vectors(self, count: int, d: int, what: str) -> np.ndarray:
        raw = self.take(count * d * 8, what)
        return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(count, d)


def load(path: str) -> Codebook:
    """Read a codebook file, verifying magic, version, length and fingerprint."""
    with open(path, "rb") as file:
        data = file.read()

    if len(data) < _HEADER.size:
        raise TruncatedFileError("Codebook file is shorter than its header.")
    magic, version = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"Not a codebook file (magic {magic!r}).")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"Codebook format version {version}, expected {FORMAT_VERSION}.")

    reader = _Reader(data, _HEADER.size)
    flags, d, seed, n_nodes, m_edges, n_attrs = _BODY_HEADER.unpack(
        reader.take(_BODY_HEADER.size, "header")
    )
    nodes = reader.vectors(n_nodes, d, "node vectors")
    edge_ids = reader.vectors(m_edges, d, "edge-id vectors")
    size = reader.vectors(1, d, "size vector")[0]
    attributes = {}
    for _ in range(n_attrs):
        (length,) = _KEY_LENGTH.unpack(reader.take(_KEY_LENGTH.size, "attribute key"))
        key = reader.take(length, "attribute key").decode("utf-8")
        attributes[key] = _frozen(reader.vectors(1, d, "attribute vector")[0])
    body_end = reader.offset
    stored = reader.take(_DIGEST_SIZE, "fingerprint")

    if hashlib.sha256(data[_HEADER.size:body_end]).digest() != stored:
        raise FingerprintMismatchError("Codebook payload does not match its fingerprint.")

    codebook = Codebook(
        dimension=d,
        seed=seed,
        node_vectors=_frozen(nodes),
        edge_id_vectors=_frozen(edge_ids),
        size_vector=_frozen(size),
        attribute_vectors=MappingProxyType(attributes),
        unitary=bool(flags & _FLAG_UNITARY),
    )
    logger.info("Loaded codebook %s from %s", codebook.fingerprint[:12], path)
    return codebook


def read_concept_vectors(path: str, key_column: str = "key") -> tuple[int, dict[str, np.ndarray]]:
    """
    Parse a concept-vector file.

    Format: UTF-8 CSV whose header is "<key_column>,dim=<d>", followed by one row
    per concept holding the key and exactly d real numbers.
    """
    with open(path, "r", encoding="utf-8", newline="") as file:
        rows = list(csv.reader(file))
    if not rows:
        raise MalformedRowError(f"{path}: empty concept-vector file.")

    header = [cell.strip() for cell in rows[0]]
    if len(header) != 2 or header[0] != key_column or not header[1].startswith("dim="):
        raise MalformedRowError(f"{path}: header must be '{key_column},dim=<d>', got {rows[0]!r}.")
    try:
        d = check_dimension(int(header[1][len("dim="):]))
    except ValueError:
        raise MalformedRowError(f"{path}: invalid dimension in header {header[1]!r}.")

    vectors: dict[str, np.ndarray] = {}
    for line_number, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        key = row[0].strip()
        if len(row) != d + 1:
            raise MalformedRowError(
                f"{path}:{line_number}: expected {d} values for {key!r}, got {len(row) - 1}."
            )
        if key in vectors:
            raise DuplicateKeyError(f"{path}:{line_number}: duplicate key {key!r}.")
        try:
            vector = np.array([float(cell) for cell in row[1:]], dtype=np.float64)
        except ValueError:
            raise MalformedRowError(f"{path}:{line_number}: non-numeric value for {key!r}.")
        if not np.all(np.isfinite(vector)):
            raise MalformedRowError(f"{path}:{line_number}: non-finite value for {key!r}.")
        vectors[key] = vector
    return d, vectors


def import_concept_vectors(
    path: str,
    key_column: str = "key",
    codebook: Optional[Codebook] = None,
    *,
    seed: int = 1,
    n_max_nodes: int = DEFAULT_MAX_NODES,
    m_max_edges: int = DEFAULT_MAX_EDGES,
    unitary: bool = False,
) -> Codebook:
    """
    Register externally computed vectors (e.g. text-encoder outputs) as attributes.

    Without a codebook, one is built at the imported dimension.
    """
    d, vectors = read_concept_vectors(path, key_column)
    if codebook is None:
        codebook = build_codebook(d, seed, n_max_nodes, m_max_edges, unitary=unitary)
    elif codebook.dimension != d:
        raise DimensionMismatchError(
            f"Imported vectors have dimension {d}, codebook has {codebook.dimension}."
        )
    logger.info("Imported %d concept vectors (d=%d) from %s", len(vectors), d, path)
    return codebook.with_vectors(vectors)
