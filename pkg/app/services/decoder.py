"""
Unbinding queries over encoded structures.

Scores are normalized dot products: for a query vector q and a codebook vector
p, score = p^T q / |p|^2, which concentrates near 1 when p*q's partner is bound
into the embedding and near 0 otherwise.
"""

import logging
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from app.models.embedding import Embedding, EncodingMode
from app.models.errors import (
    CapacityExceededError,
    EmptyInputError,
    InvalidParameterError,
    WrongModeError,
)
from app.models.reports import (
    CapacityRecord,
    CapacityResult,
    CapacityTrial,
    DecodingReport,
    MembershipReport,
    SizeRecovery,
)
from app.services.codebook import Codebook
from app.services.encoder import encode_kv_pairs
from app.services.vsa_core import (
    DEFAULT_INVERSE_FLOOR,
    HyperVector,
    as_hypervector,
    bind,
    bind_rows,
    check_dimension,
    cosine_matrix,
    invert,
    inverse_rows,
    random_hypervector,
)

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.5
LOW_CONFIDENCE_MARGIN = 0.1

Threshold = Union[float, str]

EDGE_MODES = (EncodingMode.GRAPH, EncodingMode.ATTRIBUTED, EncodingMode.NEIGHBORHOOD)
RECONSTRUCT_MODES = (EncodingMode.GRAPH, EncodingMode.NEIGHBORHOOD)


def _require_mode(emb: Embedding, allowed: Iterable[EncodingMode]) -> None:
    allowed = tuple(allowed)
    if emb.mode not in allowed:
        names = ", ".join(mode.value for mode in allowed)
        raise WrongModeError(f"Query needs a {names} embedding, got {emb.mode.value}.")


def _normalized_scores(queries: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """p^T q / |p|^2 for every (query row, target row) pair."""
    norms = np.einsum("ij,ij->i", targets, targets)
    return (np.atleast_2d(queries) @ targets.T) / norms


def auto_threshold(scores: Sequence[float]) -> float:
    """
    Split point of the widest gap in the sorted scores.

    The list is padded with the ideal non-edge score 0 and edge score 1, so an
    all-noise or all-edge score list still yields a sensible split.
    """
    values = np.sort(np.concatenate([[0.0, 1.0], np.asarray(scores, dtype=np.float64)]))
    gaps = np.diff(values)
    k = int(np.argmax(gaps))
    return float((values[k] + values[k + 1]) / 2.0)


def _resolve_threshold(threshold: Threshold, scores: Sequence[float]) -> float:
    if isinstance(threshold, str):
        if threshold != "auto":
            raise InvalidParameterError(f"Threshold must be a number or 'auto', got {threshold!r}.")
        return auto_threshold(scores)
    return float(threshold)


def edge_score(emb: Embedding, i: int, j: int, cb: Codebook, floor: float = DEFAULT_INVERSE_FLOOR) -> float:
    """Normalized score p_j^T (p_i^-1 * g) / |p_j|^2."""
    _require_mode(emb, EDGE_MODES)
    if i == j:
        raise InvalidParameterError(f"Edge query needs two distinct vertices, got ({i}, {j}).")
    p_i, p_j = cb.node(i), cb.node(j)
    unbound = bind(invert(p_i, floor).vector, emb.vector)
    return float(np.dot(p_j, unbound) / np.dot(p_j, p_j))


def estimate_size(emb: Embedding, cb: Codebook, floor: float = DEFAULT_INVERSE_FLOOR) -> SizeRecovery:
    """
    Argmax over i in 1..N_max of cosine(p_i, s^-1 * g), with the runner-up
    score kept to judge confidence.
    """
    unbound = bind(invert(cb.size_vector, floor).vector, emb.vector)
    scores = cosine_matrix(unbound[None, :], cb.node_vectors)[0]
    order = np.argsort(scores)[::-1]
    top = float(scores[order[0]])
    runner_up = float(scores[order[1]]) if scores.shape[0] > 1 else -1.0
    recovery = SizeRecovery(
        n=int(order[0]) + 1,
        top_score=top,
        runner_up_score=runner_up,
        low_confidence=top - runner_up < LOW_CONFIDENCE_MARGIN,
    )
    if recovery.low_confidence:
        logger.warning(
            "Size recovery is low-confidence: n=%d, margin %.3f", recovery.n, recovery.margin
        )
    return recovery


def recover_size(emb: Embedding, cb: Codebook, floor: float = DEFAULT_INVERSE_FLOOR) -> int:
    return estimate_size(emb, cb, floor).n


def recover_attribute(
    emb: Embedding,
    i: int,
    cb: Codebook,
    candidates: Sequence[str],
    floor: float = DEFAULT_INVERSE_FLOOR,
) -> str:
    """Closed-world attribute query: the candidate key with the best normalized score at vertex i."""
    _require_mode(emb, (EncodingMode.ATTRIBUTED,))
    if not candidates:
        raise EmptyInputError("Attribute recovery needs at least one candidate key.")
    vectors = np.stack([cb.attribute(key) for key in candidates])
    unbound = bind(invert(cb.node(i), floor).vector, emb.vector)
    scores = _normalized_scores(unbound, vectors)[0]
    return candidates[int(np.argmax(scores))]


def reconstruct_graph(
    emb: Embedding,
    cb: Codebook,
    threshold: Threshold = DEFAULT_THRESHOLD,
    *,
    safeguard: bool = True,
    vertices: Optional[Sequence[int]] = None,
    floor: float = DEFAULT_INVERSE_FLOOR,
) -> DecodingReport:
    """
    Recover size and edge set of a graph embedding.

    Parameters:
    - emb: a graph or neighborhood embedding.
    - cb: the codebook used to encode it.
    - threshold: acceptance threshold, or "auto" for the widest-gap split.
    - safeguard: when True only pairs i < j <= recovered_n are scored, so no
      phantom edge can involve a vertex beyond the recovered size. When False
      every pair inside the codebook is scored.
    - vertices: explicit candidate labels, e.g. the global labels of a
      neighborhood embedding. Overrides the range chosen by `safeguard`.
    - floor: spectral floor for the inverses.

    Returns:
    - DecodingReport: scores, raw cosines, accepted edges and confidence flags.
    """
    _require_mode(emb, RECONSTRUCT_MODES)
    size = estimate_size(emb, cb, floor)
    size_flag = invert(cb.size_vector, floor).clamped

    if vertices is not None:
        labels = sorted(set(int(v) for v in vertices))
    elif safeguard:
        labels = list(range(1, size.n + 1))
    else:
        labels = list(range(1, cb.n_max + 1))
    for label in labels:
        cb.node(label)

    edge_scores: dict[tuple[int, int], float] = {}
    raw_cosines: dict[tuple[int, int], float] = {}
    vertex_flags: tuple[bool, ...] = ()
    if len(labels) >= 2:
        p = cb.nodes(labels)
        inverses, flags = inverse_rows(p, floor)
        vertex_flags = tuple(bool(flag) for flag in flags)
        # One unbinding per vertex, then all partners at once
        unbound = bind_rows(inverses, emb.vector)
        scores = _normalized_scores(unbound, p)
        cosines = cosine_matrix(unbound, p)
        rows, columns = np.triu_indices(len(labels), k=1)
        for a, b in zip(rows.tolist(), columns.tolist()):
            pair = (labels[a], labels[b])
            edge_scores[pair] = float(scores[a, b])
            raw_cosines[pair] = float(cosines[a, b])

    threshold_used = _resolve_threshold(threshold, list(edge_scores.values()))
    accepted = frozenset(pair for pair, score in edge_scores.items() if score >= threshold_used)
    ambiguous = any(abs(score - threshold_used) < LOW_CONFIDENCE_MARGIN for score in edge_scores.values())
    clamping_flags = (size_flag, *vertex_flags)
    if any(clamping_flags):
        logger.warning(
            "Spectral clamping fired in %d of %d inverses.", sum(clamping_flags), len(clamping_flags)
        )
    logger.info(
        "Reconstructed n=%d with %d of %d scored pairs accepted (threshold %.4f).",
        size.n, len(accepted), len(edge_scores), threshold_used,
    )
    return DecodingReport(
        recovered_n=size.n,
        edge_scores=edge_scores,
        raw_cosines=raw_cosines,
        accepted_edges=accepted,
        threshold_used=threshold_used,
        clamping_flags=clamping_flags,
        size_low_confidence=size.low_confidence,
        ambiguous=ambiguous,
    )


def recover_hyperedge_members(
    emb: Embedding,
    edge_index: int,
    cb: Codebook,
    threshold: Threshold = DEFAULT_THRESHOLD,
    floor: float = DEFAULT_INVERSE_FLOOR,
) -> MembershipReport:
    """Unbind e_k from a keyed hypergraph embedding and score every p_j with j <= recovered n."""
    _require_mode(emb, (EncodingMode.HYPER_KEYED,))
    if edge_index < 1 or edge_index > cb.m_max:
        raise CapacityExceededError(f"Edge index {edge_index} outside codebook range 1..{cb.m_max}.")
    n = recover_size(emb, cb, floor)
    unbound = bind(invert(cb.edge_id(edge_index), floor).vector, emb.vector)
    labels = list(range(1, n + 1))
    values = _normalized_scores(unbound, cb.nodes(labels))[0]
    scores = {v: float(score) for v, score in zip(labels, values)}
    threshold_used = _resolve_threshold(threshold, list(scores.values()))
    members = frozenset(v for v, score in scores.items() if score >= threshold_used)
    low_confidence = not members or any(
        abs(score - threshold_used) < LOW_CONFIDENCE_MARGIN for score in scores.values()
    )
    return MembershipReport(edge_index, members, scores, threshold_used, low_confidence)


def unbind_value(u: HyperVector, k: HyperVector, floor: float = DEFAULT_INVERSE_FLOOR) -> HyperVector:
    """Recover the value bound to key k in a key-value bundle: k^-1 * u."""
    u, k = as_hypervector(u), as_hypervector(k)
    return bind(invert(k, floor).vector, u)


def _trial_generator(seed: int, n: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(n, trial))))


def _capacity_trial(
    d: int, n: int, trial: int, seed: int, unitary: bool, floor: float
) -> CapacityTrial:
    rng = _trial_generator(seed, n, trial)
    keys = np.stack([random_hypervector(d, rng, unitary) for _ in range(n)])
    # With a single pair a fresh distractor provides the wrong-value reference
    value_count = n + 1 if n == 1 else n
    values = np.stack([random_hypervector(d, rng, unitary) for _ in range(value_count)])
    u = encode_kv_pairs(list(zip(keys, values[:n])))
    inverses, _ = inverse_rows(keys, floor)
    recovered = bind_rows(inverses, u)
    cosines = cosine_matrix(recovered, values)
    correct = np.diag(cosines[:, :n])
    wrong = cosines.copy()
    wrong[np.arange(n), np.arange(n)] = -np.inf
    return CapacityTrial(
        n=n,
        d=d,
        trial=trial,
        min_correct_cosine=float(correct.min()),
        max_wrong_cosine=float(wrong.max()),
        mean_correct_cosine=float(correct.mean()),
    )


def capacity_sweep(
    d: int,
    n_values: Sequence[int],
    trials: int,
    seed: int,
    *,
    unitary: bool = False,
    floor: float = DEFAULT_INVERSE_FLOOR,
) -> CapacityResult:
    """
    Key-value recovery sweep.

    For every n and trial, n fresh key/value pairs are bundled, every value is
    recovered by unbinding its key, and the worst correct and worst wrong
    cosines are recorded. Each (n, trial) draws from its own substream, so
    results do not depend on which n values are swept together.
    """
    d = check_dimension(d)
    if not n_values:
        raise EmptyInputError("capacity_sweep needs at least one n value.")
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}.")
    if any(n < 1 for n in n_values):
        raise InvalidParameterError(f"Every n must be >= 1, got {list(n_values)}.")

    records = []
    all_trials = []
    for n in sorted(set(int(n) for n in n_values)):
        per_n = [_capacity_trial(d, n, trial, seed, unitary, floor) for trial in range(trials)]
        all_trials.extend(per_n)
        record = CapacityRecord(
            n=n,
            d=d,
            min_correct_cosine=min(t.min_correct_cosine for t in per_n),
            max_wrong_cosine=max(t.max_wrong_cosine for t in per_n),
            mean_correct_cosine=float(np.mean([t.mean_correct_cosine for t in per_n])),
        )
        logger.info(
            "Capacity n=%d d=%d: min correct %.4f, max wrong %.4f, separation=%s",
            n, d, record.min_correct_cosine, record.max_wrong_cosine, record.separation,
        )
        records.append(record)
    return CapacityResult(tuple(records), tuple(all_trials))
