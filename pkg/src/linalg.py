"""
Dense complex matrix helpers used throughout the toolkit.
All functions are pure and return fresh numpy arrays.
"""

import logging
from typing import List, Tuple

import numpy as np
import scipy.linalg

from .config import LIBRARY_TOLERANCE, STRICT_TOLERANCE
from .errors import (ConvergenceError, DimensionError, ImaginaryResidueError,
                     NonFiniteError, ToleranceError)

logger = logging.getLogger(__name__)


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite complex128 2-D array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    return arr


def _as_square(m, operation: str) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{operation} needs a square matrix, got shape {arr.shape}")
    return arr


def _check_tolerance(tol: float):
    if not tol > 0:
        raise ToleranceError(f"tolerance must be positive, got {tol}")


def hermitian_conjugate(m) -> np.ndarray:
    return as_matrix(m).conj().T.copy()


def hermitian_split(a) -> Tuple[np.ndarray, np.ndarray]:
    """Split a square matrix into its hermitian and antihermitian parts."""
    arr = _as_square(a, "hermitian_split")
    adjoint = arr.conj().T
    return (arr + adjoint) / 2, (arr - adjoint) / 2


def matrix_exp(m) -> np.ndarray:
    """exp(m) via scipy's scaling-and-squaring Padé approximant."""
    arr = _as_square(m, "matrix_exp")
    with np.errstate(over='ignore', invalid='ignore'):
        try:
            result = scipy.linalg.expm(arr)
        except OverflowError as e:
            raise ConvergenceError(f"matrix exponential overflowed: {e}") from e
    if not np.all(np.isfinite(result)):
        raise ConvergenceError("matrix exponential overflowed")
    return result


def _rank_cutoff(singular_values: np.ndarray, tol: float) -> float:
    """Relative to the largest singular value, but never below tol itself."""
    largest = singular_values[0] if singular_values.size else 0.0
    return tol * max(1.0, float(largest))


def nullspace_matrix(m, tol: float = LIBRARY_TOLERANCE) -> np.ndarray:
    """Orthonormal nullspace basis as the columns of a (cols, k) array."""
    _check_tolerance(tol)
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix contains NaN or Inf entries")
    if arr.shape[0] == 0:
        return np.eye(arr.shape[1], dtype=np.complex128)
    _, singular_values, vh = scipy.linalg.svd(arr, full_matrices=True)
    rank = int(np.sum(singular_values > _rank_cutoff(singular_values, tol)))
    return vh[rank:].conj().T


def nullspace(m, tol: float = LIBRARY_TOLERANCE) -> List[np.ndarray]:
    """Orthonormal vectors v with |m v| below tol * max(1, largest singular value)."""
    basis = nullspace_matrix(m, tol)
    return [basis[:, i].copy() for i in range(basis.shape[1])]


def numerical_rank(m, tol: float = LIBRARY_TOLERANCE) -> Tuple[int, np.ndarray]:
    """(rank, singular values) with the same cutoff as the nullspace."""
    _check_tolerance(tol)
    singular_values = scipy.linalg.svdvals(as_matrix(m))
    if singular_values.size == 0:
        return 0, singular_values
    return int(np.sum(singular_values > _rank_cutoff(singular_values, tol))), singular_values


def commutator(a, b) -> np.ndarray:
    """[a, b]; broadcasts over leading stack axes."""
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    return a @ b + b @ a


def pair_commutators(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Array c with c[m, n] = [a[m], b[n]] for two stacks of square matrices."""
    left = np.einsum('mij,njk->mnik', a, b)
    right = np.einsum('nij,mjk->mnik', b, a)
    return left - right


def pair_anticommutators(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    left = np.einsum('mij,njk->mnik', a, b)
    right = np.einsum('nij,mjk->mnik', b, a)
    return left + right


def max_residual(a, b=None) -> float:
    """Largest entrywise absolute difference (or magnitude when b is None)."""
    diff = np.asarray(a) if b is None else np.asarray(a) - np.asarray(b)
    if diff.size == 0:
        return 0.0
    return float(np.max(np.abs(diff)))


def real_part(m, tol: float = STRICT_TOLERANCE) -> np.ndarray:
    """Real part of m, refusing when the imaginary part exceeds tol."""
    arr = np.asarray(m)
    if np.iscomplexobj(arr):
        residue = max_residual(arr.imag)
        if residue > tol:
            raise ImaginaryResidueError(f"imaginary residue {residue:.3e} exceeds {tol:.1e}")
        return np.ascontiguousarray(arr.real, dtype=np.float64)
    return np.array(arr, dtype=np.float64)


def is_hermitian(m, tol: float = LIBRARY_TOLERANCE) -> bool:
    arr = _as_square(m, "is_hermitian")
    return max_residual(arr, arr.conj().T) <= tol


def is_unitary(m, tol: float = LIBRARY_TOLERANCE) -> bool:
    arr = _as_square(m, "is_unitary")
    return max_residual(arr.conj().T @ arr, np.eye(arr.shape[0])) <= tol


def kron_stack(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise np.kron over two equally long stacks of matrices."""
    count = a.shape[0]
    if b.shape[0] != count:
        raise DimensionError(f"stack lengths differ: {count} vs {b.shape[0]}")
    out = np.einsum('mij,mkl->mikjl', a, b)
    return out.reshape(count, a.shape[1] * b.shape[1], a.shape[2] * b.shape[2])


def identity_stack(count: int, dim: int) -> np.ndarray:
    return np.broadcast_to(np.eye(dim, dtype=np.complex128), (count, dim, dim)).copy()
