"""
Hypervector algebra over real d-dimensional vectors.

Binding is circular convolution evaluated in the Fourier domain, bundling is
element-wise addition, and inverses are exact spectral reciprocals with a
magnitude floor. All functions are pure and return new float64 arrays.
"""

import logging
from dataclasses import dataclass

import numpy as np

from app.models.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidParameterError,
    NumericalFailureError,
    ZeroVectorError,
)

logger = logging.getLogger(__name__)

HyperVector = np.ndarray

DEFAULT_INVERSE_FLOOR = 1e-8


@dataclass(frozen=True)
class InverseResult:
    vector: HyperVector
    clamped: bool


def check_dimension(d: int) -> int:
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"Dimension must be an integer >= 2, got {d}.")
    return int(d)


def as_hypervector(a) -> HyperVector:
    vector = np.asarray(a, dtype=np.float64)
    if vector.ndim != 1:
        raise InvalidDimensionError(f"Hypervectors are 1-D, got shape {vector.shape}.")
    check_dimension(vector.shape[0])
    return vector


def _same_dimension(a: HyperVector, b: HyperVector) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatchError(
            f"Dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}."
        )


def _finite(vector: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(vector)):
        raise NumericalFailureError("Operation produced non-finite entries.")
    return vector


def random_hypervector(d: int, rng: np.random.Generator, unitary: bool = False) -> HyperVector:
    """
    Sample a vector with i.i.d. N(0, 1/d) entries.

    With unitary=True the sample is projected to unit magnitude in every
    frequency bin, so its exact inverse equals its involution.
    """
    d = check_dimension(d)
    vector = rng.normal(0.0, np.sqrt(1.0 / d), size=d)
    if unitary:
        vector = project_unitary(vector)
    return vector


def project_unitary(a: HyperVector) -> HyperVector:
    spectrum = np.fft.rfft(a)
    magnitude = np.abs(spectrum)
    magnitude[magnitude == 0.0] = 1.0
    return np.fft.irfft(spectrum / magnitude, n=a.shape[-1])


def identity(d: int) -> HyperVector:
    d = check_dimension(d)
    unit = np.zeros(d, dtype=np.float64)
    unit[0] = 1.0
    return unit


def zero(d: int) -> HyperVector:
    return np.zeros(check_dimension(d), dtype=np.float64)


def bind(a: HyperVector, b: HyperVector) -> HyperVector:
    """Circular convolution of a and b in O(d log d)."""
    a, b = as_hypervector(a), as_hypervector(b)
    _same_dimension(a, b)
    d = a.shape[0]
    return _finite(np.fft.irfft(np.fft.rfft(a) * np.fft.rfft(b), n=d))


def bind_rows(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Row-wise binding of two (k, d) stacks, or of a stack with a single vector."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    _same_dimension(left, right)
    d = left.shape[-1]
    spectrum = np.fft.rfft(left, axis=-1) * np.fft.rfft(right, axis=-1)
    return _finite(np.fft.irfft(spectrum, n=d, axis=-1))


def bundle(a: HyperVector, b: HyperVector) -> HyperVector:
    a, b = as_hypervector(a), as_hypervector(b)
    _same_dimension(a, b)
    return _finite(a + b)


def bundle_all(terms: np.ndarray) -> HyperVector:
    """Bundle a (k, d) stack of terms in row order."""
    terms = np.asarray(terms, dtype=np.float64)
    total = np.zeros(terms.shape[-1], dtype=np.float64)
    for row in terms:
        total += row
    return _finite(total)


def _reciprocal_spectrum(spectrum: np.ndarray, floor: float) -> tuple[np.ndarray, np.ndarray]:
    magnitude = np.abs(spectrum)
    small = magnitude < floor
    if np.any(small):
        # Keep the phase, lift the magnitude to the floor
        phase = np.where(magnitude > 0.0, spectrum / np.where(magnitude > 0.0, magnitude, 1.0), 1.0)
        spectrum = np.where(small, phase * floor, spectrum)
    return 1.0 / spectrum, small


def invert(a: HyperVector, floor: float = DEFAULT_INVERSE_FLOOR) -> InverseResult:
    """
    Exact Fourier-domain inverse of a, reporting whether any spectral component
    had to be clamped up to `floor` before reciprocation.
    """
    a = as_hypervector(a)
    if floor <= 0:
        raise InvalidParameterError(f"Inverse floor must be positive, got {floor}.")
    reciprocal, small = _reciprocal_spectrum(np.fft.rfft(a), floor)
    clamped = bool(np.any(small))
    if clamped:
        logger.debug("Inverse clamped %d spectral components.", int(small.sum()))
    return InverseResult(_finite(np.fft.irfft(reciprocal, n=a.shape[0])), clamped)


def inverse(a: HyperVector, floor: float = DEFAULT_INVERSE_FLOOR) -> HyperVector:
    return invert(a, floor).vector


def inverse_rows(stack: np.ndarray, floor: float = DEFAULT_INVERSE_FLOOR) -> tuple[np.ndarray, np.ndarray]:
    """Invert every row of a (k, d) stack; returns the inverses and per-row clamp flags."""
    stack = np.asarray(stack, dtype=np.float64)
    reciprocal, small = _reciprocal_spectrum(np.fft.rfft(stack, axis=-1), floor)
    inverses = _finite(np.fft.irfft(reciprocal, n=stack.shape[-1], axis=-1))
    return inverses, np.any(small, axis=-1)


def cosine(a: HyperVector, b: HyperVector) -> float:
    a, b = as_hypervector(a), as_hypervector(b)
    _same_dimension(a, b)
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVectorError("Cosine similarity is undefined for a zero vector.")
    return float(np.clip(np.dot(a, b) / (norm_a * norm_b), -1.0, 1.0))


def cosine_matrix(rows: np.ndarray, columns: np.ndarray) -> np.ndarray:
    """Pairwise cosine between the rows of two stacks."""
    rows = np.asarray(rows, dtype=np.float64)
    columns = np.asarray(columns, dtype=np.float64)
    _same_dimension(rows, columns)
    row_norms = np.linalg.norm(rows, axis=-1)
    column_norms = np.linalg.norm(columns, axis=-1)
    if np.any(row_norms == 0.0) or np.any(column_norms == 0.0):
        raise ZeroVectorError("Cosine similarity is undefined for a zero vector.")
    similarity = (rows @ columns.T) / np.outer(row_norms, column_norms)
    return np.clip(similarity, -1.0, 1.0)
