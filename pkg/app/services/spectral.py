"""
Spectral diagnostic: incidence matrix, Laplacian, Dirac operator D with D^2 = Laplacian,
and the coefficient matrices E_k = D diag(e_k).
"""

import logging

import numpy as np
import scipy.linalg

from app.models.errors import CapacityExceededError, NumericalFailureError
from app.models.graph import Graph
from app.models.reports import SpectralBundle

logger = logging.getLogger(__name__)

MAX_SPECTRAL_VERTICES = 512
DEFAULT_EIG_TOLERANCE = 1e-10


def _check_size(g: Graph) -> None:
    if g.n > MAX_SPECTRAL_VERTICES:
        raise CapacityExceededError(
            f"Dense spectral diagnostic is capped at {MAX_SPECTRAL_VERTICES} vertices, got {g.n}."
        )


def incidence_matrix(g: Graph) -> np.ndarray:
    """|V| x |E| matrix; edge (i, j) with i < j is oriented i -> j, so column = -e_i + e_j."""
    _check_size(g)
    position = {v: row for row, v in enumerate(g.vertices)}
    incidence = np.zeros((g.n, len(g.edges)), dtype=np.float64)
    for column, (i, j) in enumerate(g.edges):
        incidence[position[i], column] = -1.0
        incidence[position[j], column] = 1.0
    return incidence


def laplacian(g: Graph) -> np.ndarray:
    incidence = incidence_matrix(g)
    return incidence @ incidence.T


def _eigen(delta: np.ndarray, eig_tolerance: float) -> tuple[np.ndarray, np.ndarray]:
    eigenvalues, eigenvectors = scipy.linalg.eigh(delta)
    epsilon = eig_tolerance * np.linalg.norm(delta)
    if eigenvalues.size and eigenvalues[0] < -epsilon:
        raise NumericalFailureError(
            f"Laplacian eigenvalue {eigenvalues[0]:.3e} is below -{epsilon:.3e}."
        )
    clamped = int(np.sum(eigenvalues < 0.0))
    if clamped:
        logger.debug("Clamped %d slightly negative eigenvalues to zero.", clamped)
    return np.maximum(eigenvalues, 0.0), eigenvectors


def _dirac_from_eigenpairs(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> np.ndarray:
    dirac_operator = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T
    return (dirac_operator + dirac_operator.T) / 2.0


def dirac_from_laplacian(delta: np.ndarray, eig_tolerance: float = DEFAULT_EIG_TOLERANCE) -> np.ndarray:
    return _dirac_from_eigenpairs(*_eigen(delta, eig_tolerance))


def dirac(g: Graph, eig_tolerance: float = DEFAULT_EIG_TOLERANCE) -> np.ndarray:
    """D = Q sqrt(L) Q^T from the eigendecomposition of the Laplacian."""
    return dirac_from_laplacian(laplacian(g), eig_tolerance)


def _coefficients(dirac_operator: np.ndarray) -> tuple[np.ndarray, ...]:
    n = dirac_operator.shape[0]
    return tuple(dirac_operator @ np.diag(np.eye(n)[k]) for k in range(n))


def coefficient_matrices(g: Graph, eig_tolerance: float = DEFAULT_EIG_TOLERANCE) -> list[np.ndarray]:
    """E_k = D diag(e_k): D with every column but the k-th zeroed."""
    return list(_coefficients(dirac(g, eig_tolerance)))


def spectral_bundle(g: Graph, eig_tolerance: float = DEFAULT_EIG_TOLERANCE) -> SpectralBundle:
    incidence = incidence_matrix(g)
    delta = incidence @ incidence.T
    eigenvalues, eigenvectors = _eigen(delta, eig_tolerance)
    dirac_operator = _dirac_from_eigenpairs(eigenvalues, eigenvectors)
    return SpectralBundle(
        incidence=incidence,
        laplacian=delta,
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        dirac=dirac_operator,
        coefficients=_coefficients(dirac_operator),
    )


def zero_eigenvalue_multiplicity(eigenvalues: np.ndarray, tolerance: float = 1e-8) -> int:
    """Number of (numerically) zero Laplacian eigenvalues, i.e. connected components."""
    scale = max(1.0, float(np.max(np.abs(eigenvalues), initial=0.0)))
    return int(np.sum(np.abs(eigenvalues) <= tolerance * scale))


def dirac_residual(bundle: SpectralBundle) -> float:
    """Relative Frobenius error of D^2 against the Laplacian (0 for an edgeless graph)."""
    norm = np.linalg.norm(bundle.laplacian)
    if norm == 0.0:
        return float(np.linalg.norm(bundle.dirac @ bundle.dirac))
    return float(np.linalg.norm(bundle.dirac @ bundle.dirac - bundle.laplacian) / norm)
