from dataclasses import dataclass, field

import numpy as np

from app.models.graph import Edge


@dataclass(frozen=True)
class SizeRecovery:
    """Outcome of the size query: argmax vertex count and how sure we are."""

    n: int
    top_score: float
    runner_up_score: float
    low_confidence: bool

    @property
    def margin(self) -> float:
        return self.top_score - self.runner_up_score


@dataclass(frozen=True)
class DecodingReport:
    """
    Result of a full graph reconstruction.

    Attributes:
    - recovered_n: size recovered before any edge was scored.
    - edge_scores: normalized score p_j^T (p_i^-1 * g) / |p_j|^2 per scored pair.
    - raw_cosines: cosine(p_i^-1 * g, p_j) per scored pair.
    - accepted_edges: pairs whose score reached threshold_used.
    - threshold_used: the fixed or auto-selected threshold.
    - clamping_flags: one flag per inverse applied (size marker first, then vertices).
    - size_low_confidence: the size query's top two scores were close.
    - ambiguous: some score fell within 0.1 of the threshold.
    """

    recovered_n: int
    edge_scores: dict[Edge, float]
    raw_cosines: dict[Edge, float]
    accepted_edges: frozenset[Edge]
    threshold_used: float
    clamping_flags: tuple[bool, ...]
    size_low_confidence: bool = False
    ambiguous: bool = False


@dataclass(frozen=True)
class MembershipReport:
    """Members recovered for one hyperedge id, with the per-vertex scores."""

    edge_index: int
    members: frozenset[int]
    scores: dict[int, float]
    threshold_used: float
    low_confidence: bool


@dataclass(frozen=True)
class CapacityTrial:
    n: int
    d: int
    trial: int
    min_correct_cosine: float
    max_wrong_cosine: float
    mean_correct_cosine: float

    @property
    def separation(self) -> bool:
        return self.min_correct_cosine > self.max_wrong_cosine


@dataclass(frozen=True)
class CapacityRecord:
    """Worst case over all pairs and trials for one bundle size n."""

    n: int
    d: int
    min_correct_cosine: float
    max_wrong_cosine: float
    mean_correct_cosine: float

    @property
    def separation(self) -> bool:
        return self.min_correct_cosine > self.max_wrong_cosine


@dataclass(frozen=True)
class CapacityResult:
    records: tuple[CapacityRecord, ...]
    trials: tuple[CapacityTrial, ...] = field(default_factory=tuple)

    def record_for(self, n: int) -> CapacityRecord:
        for record in self.records:
            if record.n == n:
                return record
        raise KeyError(n)


@dataclass(frozen=True)
class SpectralBundle:
    """Incidence, Laplacian, eigen-decomposition, Dirac operator and its coefficients."""

    incidence: np.ndarray
    laplacian: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    dirac: np.ndarray
    coefficients: tuple[np.ndarray, ...]
