"""
Labeled embedding datasets for the downstream readout probe.

Every sample owns a seed-derived substream, so a dataset is identical no matter
how many worker threads build it.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp

from app.models.embedding import Embedding
from app.models.errors import EmptyInputError, InvalidParameterError
from app.models.graph import Graph
from app.services import graph_generators, graph_oracles
from app.services.codebook import Codebook
from app.services.encoder import encode_graph, encode_hypergraph, encode_node_neighborhood

logger = logging.getLogger(__name__)

TRAIN_FRACTION = 0.8
_SPLIT_STREAM = 0
_SAMPLE_STREAM = 1


class Task(str, Enum):
    NUM_NODES = "num_nodes"
    NUM_EDGES = "num_edges"
    HAS_CYCLE = "has_cycle"
    NUM_TRIANGLES = "num_triangles"
    NODE_DEGREE = "node_degree"
    HYPER_NUM_NODES = "hyper_num_nodes"
    HYPER_NUM_EDGES = "hyper_num_edges"

    @property
    def is_classification(self) -> bool:
        return self is Task.HAS_CYCLE

    @property
    def is_hypergraph(self) -> bool:
        return self in (Task.HYPER_NUM_NODES, Task.HYPER_NUM_EDGES)


class GeneratorParams(BaseModel):
    """
    Parameters of the random structures behind a probe dataset.

    - family: "er", "tree" (random spanning tree plus chords) or "ba".
    - n_min, n_max: vertex count drawn uniformly from this range.
    - p: ER edge probability; when None it is set per graph to
      p_balanced(n), at which exactly half of the graphs are acyclic.
    - max_chords: tree family; half of the trees get no chord, the rest get
      1..max_chords (a single chord keeps the classes linearly separable).
    - ba_m: attachment count of the BA family.
    - m_min, m_max, k_mean: hypergraph tasks, hyperedge count range and mean
      hyperedge size.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: Literal["er", "tree", "ba"] = "er"
    n_min: int = Field(5, ge=1)
    n_max: int = Field(15, ge=1)
    p: Optional[float] = Field(None, ge=0.0, le=1.0)
    max_chords: int = Field(1, ge=1)
    ba_m: int = Field(1, ge=1)
    m_min: int = Field(1, ge=1)
    m_max: int = Field(6, ge=1)
    k_mean: float = Field(3.0, gt=0.0)

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.n_min > self.n_max:
            raise ValueError("n_min must not exceed n_max")
        if self.m_min > self.m_max:
            raise ValueError("m_min must not exceed m_max")
        if self.family == "ba" and self.n_min <= self.ba_m:
            raise ValueError("the ba family needs n_min > ba_m")
        return self


@dataclass(frozen=True)
class LabeledEmbeddingSet:
    """
    Embedding matrix with targets and a disjoint, covering train/test split.

    Attributes:
    - X: (size, d) float64 embeddings.
    - y: float targets (class index for classification tasks).
    - task: task name.
    - classification: whether y holds class labels.
    - train_index, test_index: row indices of the two splits.
    """

    X: np.ndarray
    y: np.ndarray
    task: str
    classification: bool
    train_index: np.ndarray
    test_index: np.ndarray

    def __post_init__(self):
        if self.X.shape[0] != self.y.shape[0]:
            raise InvalidParameterError(
                f"{self.X.shape[0]} embeddings but {self.y.shape[0]} targets."
            )
        split = np.concatenate([self.train_index, self.test_index])
        if np.sort(split).tolist() != list(range(self.X.shape[0])):
            raise InvalidParameterError("Train and test splits must be disjoint and cover every row.")

    @property
    def d(self) -> int:
        return int(self.X.shape[1])

    @property
    def size(self) -> int:
        return int(self.X.shape[0])

    @property
    def X_train(self) -> np.ndarray:
        return self.X[self.train_index]

    @property
    def y_train(self) -> np.ndarray:
        return self.y[self.train_index]

    @property
    def X_test(self) -> np.ndarray:
        return self.X[self.test_index]

    @property
    def y_test(self) -> np.ndarray:
        return self.y[self.test_index]

    @classmethod
    def from_arrays(
        cls, X, y, task: str = "custom", classification: bool = False, seed: int = 0
    ) -> "LabeledEmbeddingSet":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        train_index, test_index = split_indices(X.shape[0], seed)
        return cls(X, y, task, classification, train_index, test_index)


def split_indices(size: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded 80/20 permutation split; a single row goes to the training side."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_SPLIT_STREAM,)))
    order = rng.permutation(size)
    train_count = size if size < 2 else min(size - 1, max(1, int(round(TRAIN_FRACTION * size))))
    return np.sort(order[:train_count]), np.sort(order[train_count:])


def forest_probability(n: int, p: float) -> float:
    """
    Exact probability that G(n, p) is acyclic.

    The component of vertex 1 is a tree on m vertices: pick its other m - 1
    vertices, one of m^(m-2) spanning trees, no further edge inside and none
    leaving it; the remaining n - m vertices form a forest on their own.
    Accumulated in log space.
    """
    if n < 3 or p <= 0.0:
        return 1.0
    if p >= 1.0:
        return 0.0
    log_p, log_q = np.log(p), np.log1p(-p)
    log_forest = np.zeros(n + 1)
    for k in range(1, n + 1):
        m = np.arange(1, k + 1, dtype=np.float64)
        log_choose = gammaln(k) - gammaln(m) - gammaln(k - m + 1)
        absent = m * (m - 1) / 2 - (m - 1) + m * (k - m)
        terms = (log_choose + (m - 2) * np.log(m) + (m - 1) * log_p
                 + absent * log_q + log_forest[k - m.astype(int)])
        log_forest[k] = logsumexp(terms)
    return float(np.exp(log_forest[n]))


@lru_cache(maxsize=None)
def p_balanced(n: int) -> float:
    """
    Edge probability at which exactly half of the G(n, p) graphs are acyclic.
    """
    if n < 3:
        return 0.5
    return float(brentq(lambda p: forest_probability(n, p) - 0.5, 1e-12, 1.0 - 1e-12, xtol=1e-14))


def _sample_graph(params: GeneratorParams, rng: np.random.Generator, graph_seed: int) -> Graph:
    n = int(rng.integers(params.n_min, params.n_max + 1))
    if params.family == "tree":
        max_chords = min(params.max_chords, n * (n - 1) // 2 - (n - 1))
        chords = 0 if max_chords == 0 or rng.random() < 0.5 else int(rng.integers(1, max_chords + 1))
        return graph_generators.gen_tree(n, chords, graph_seed)
    if params.family == "ba":
        return graph_generators.gen_ba(n, params.ba_m, graph_seed)
    p = params.p if params.p is not None else p_balanced(n)
    return graph_generators.gen_er(n, p, graph_seed)


def _graph_label(task: Task, g: Graph) -> float:
    if task is Task.NUM_NODES:
        return float(g.n)
    if task is Task.NUM_EDGES:
        return float(len(g.edges))
    if task is Task.HAS_CYCLE:
        return 1.0 if graph_oracles.has_cycle(g) else 0.0
    return float(graph_oracles.count_triangles(g))


def _sample(task: Task, params: GeneratorParams, cb: Codebook, seed: int, index: int) -> tuple[Embedding, float]:
    sequence = np.random.SeedSequence(seed, spawn_key=(_SAMPLE_STREAM, index))
    rng = np.random.default_rng(sequence)
    structure_seed = int(sequence.generate_state(1)[0])

    if task.is_hypergraph:
        n = int(rng.integers(params.n_min, params.n_max + 1))
        m = int(rng.integers(params.m_min, params.m_max + 1))
        h = graph_generators.gen_hyper_er(n, m, min(params.k_mean, float(n)), structure_seed)
        label = float(n) if task is Task.HYPER_NUM_NODES else float(m)
        return encode_hypergraph(h, cb), label

    g = _sample_graph(params, rng, structure_seed)
    if task is Task.NODE_DEGREE:
        v = int(rng.integers(1, g.n + 1))
        return encode_node_neighborhood(g, v, cb), float(graph_oracles.degree(g, v))
    return encode_graph(g, cb), _graph_label(task, g)


def build_dataset(
    task,
    params: GeneratorParams,
    cb: Codebook,
    size: int,
    seed: int,
    *,
    workers: int = 1,
) -> LabeledEmbeddingSet:
    """
    Generate `size` random structures, encode them and label them with the
    matching oracle.

    Parameters:
    - task: a Task or its name.
    - params: generator parameters.
    - cb: codebook used for every encoding.
    - size: number of samples.
    - seed: master seed; sample k draws from substream (seed, k).
    - workers: threads used to build samples.

    Returns:
    - LabeledEmbeddingSet with an 80/20 train/test split.
    """
    task = Task(task)
    if size <= 0:
        raise EmptyInputError("A probe dataset needs at least one sample.")
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}.")

    def build(index: int) -> tuple[Embedding, float]:
        return _sample(task, params, cb, seed, index)

    if workers == 1:
        samples = [build(index) for index in range(size)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(build, range(size)))

    X = np.stack([embedding.vector for embedding, _ in samples])
    y = np.asarray([label for _, label in samples], dtype=np.float64)
    train_index, test_index = split_indices(size, seed)
    if task.is_classification:
        logger.info(
            "Built %s dataset: %d samples, %d positive", task.value, size, int(y.sum())
        )
    else:
        logger.info(
            "Built %s dataset: %d samples, targets in [%g, %g]", task.value, size, y.min(), y.max()
        )
    return LabeledEmbeddingSet(X, y, task.value, task.is_classification, train_index, test_index)
