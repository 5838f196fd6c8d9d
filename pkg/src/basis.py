"""
Hermitian utility basis of the N x N matrices, its anti-representation,
and real changes of basis.

The N^2 basis matrices are stored as one (N^2, N, N) complex array in the
fixed order plus (a<b), minus (a<b), diag (a=2..N), time. Pairs inside
the plus and minus families are in lexicographic (a, b) order.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from .config import BASIS_ORDERING, LIBRARY_TOLERANCE, STRICT_TOLERANCE
from .errors import (DimensionError, ImaginaryResidueError, SingularMatrixError)
from .linalg import as_matrix, max_residual, real_part
from .report import VerificationRecord

logger = logging.getLogger(__name__)

_FAMILY_SYMBOLS = {"plus": "+", "minus": "-", "diag": "0", "time": "0"}
_ANTI_KIND = {"utility": "anti", "anti": "utility", "primed": "primed"}


@dataclass(frozen=True)
class BasisLabel:
    """Label of one basis matrix, e.g. plus (1, 2) or the time label (1, 1)."""

    family: str
    a: int
    b: int

    def __post_init__(self):
        if self.family not in BASIS_ORDERING:
            raise DimensionError(f"unknown basis family {self.family!r}")
        if self.family in ("plus", "minus") and not 1 <= self.a < self.b:
            raise DimensionError(f"{self.family} label needs 1 <= a < b, got ({self.a}, {self.b})")
        if self.family == "diag" and not (self.a == self.b and self.a >= 2):
            raise DimensionError(f"diag label needs a = b >= 2, got ({self.a}, {self.b})")
        if self.family == "time" and (self.a, self.b) != (1, 1):
            raise DimensionError(f"time label is (1, 1), got ({self.a}, {self.b})")

    @property
    def name(self) -> str:
        return f"{_FAMILY_SYMBOLS[self.family]},{self.a}{self.b}"

    @property
    def is_time(self) -> bool:
        return self.family == "time"

    def to_json(self) -> dict:
        return {"family": self.family, "a": self.a, "b": self.b, "name": self.name}

    @classmethod
    def from_json(cls, doc: dict) -> "BasisLabel":
        return cls(family=doc["family"], a=int(doc["a"]), b=int(doc["b"]))


def utility_labels(n: int) -> List[BasisLabel]:
    """Labels of the utility basis in storage order."""
    if n < 1:
        raise DimensionError(f"N must be >= 1, got {n}")
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    labels = [BasisLabel("plus", a, b) for a, b in pairs]
    labels += [BasisLabel("minus", a, b) for a, b in pairs]
    labels += [BasisLabel("diag", a, a) for a in range(2, n + 1)]
    labels.append(BasisLabel("time", 1, 1))
    return labels


def _utility_matrix(label: BasisLabel, n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=np.complex128)
    a, b = label.a - 1, label.b - 1
    if label.family == "plus":
        m[a, b] = m[b, a] = 0.5
    elif label.family == "minus":
        m[a, b] = -0.5j
        m[b, a] = 0.5j
    elif label.family == "diag":
        scale = 1.0 / np.sqrt(2.0 * (label.a ** 2 - label.a))
        m[np.arange(a), np.arange(a)] = scale
        m[a, a] = -(label.a - 1) * scale
    else:
        m[np.arange(n), np.arange(n)] = 1.0 / np.sqrt(2.0 * n)
    return m


@dataclass(frozen=True, eq=False)
class HermitianBasis:
    """N^2 matrices with their labels; kind is 'utility', 'anti' or 'primed'."""

    n: int
    matrices: np.ndarray
    labels: Tuple[BasisLabel, ...]
    kind: str = "utility"

    def __post_init__(self):
        matrices = np.array(self.matrices, dtype=np.complex128)
        dim = self.n * self.n
        if matrices.shape != (dim, self.n, self.n):
            raise DimensionError(f"expected {dim} matrices of size {self.n}, got shape {matrices.shape}")
        if len(self.labels) != dim:
            raise DimensionError(f"expected {dim} labels, got {len(self.labels)}")
        if self.kind not in _ANTI_KIND:
            raise DimensionError(f"unknown basis kind {self.kind!r}")
        matrices.setflags(write=False)
        object.__setattr__(self, 'matrices', matrices)
        object.__setattr__(self, 'labels', tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.n * self.n

    @property
    def time_index(self) -> int:
        """Zero-based position of the time label."""
        return self.dim - 1

    @property
    def is_utility(self) -> bool:
        return self.kind == "utility"

    @cached_property
    def gram(self) -> np.ndarray:
        """G[m, n] = 2 tr(h^m h^n)."""
        return 2.0 * np.einsum('mab,nba->mn', self.matrices, self.matrices)

    @cached_property
    def is_orthonormal(self) -> bool:
        return max_residual(self.gram, np.eye(self.dim)) <= STRICT_TOLERANCE * max(1, self.dim)

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, index: int) -> np.ndarray:
        return self.matrices[index]

    def index_of(self, label: BasisLabel) -> int:
        """Zero-based position of label."""
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise KeyError(label.name) from e

    def flat_index_of(self, label: BasisLabel) -> int:
        """One-based flat index sigma used in printed tables."""
        return self.index_of(label) + 1

    def combine(self, weights) -> np.ndarray:
        """Sum_m weights[m] h^m."""
        weights = np.asarray(weights)
        if weights.shape != (self.dim,):
            raise DimensionError(f"expected {self.dim} weights, got shape {weights.shape}")
        return np.einsum('m,mab->ab', weights, self.matrices)


def build_utility_basis(n: int) -> HermitianBasis:
    """Trace-orthonormal hermitian basis with 2 tr(h^m h^n) = delta."""
    labels = utility_labels(n)
    matrices = np.stack([_utility_matrix(label, n) for label in labels])
    logger.debug(f"🧱 Built utility basis for N={n} ({len(labels)} matrices)")
    return HermitianBasis(n=n, matrices=matrices, labels=tuple(labels), kind="utility")


def anti_rep(basis: HermitianBasis) -> HermitianBasis:
    """The anti-representation -h^T; applying it twice returns the original."""
    matrices = -np.swapaxes(basis.matrices, 1, 2)
    return HermitianBasis(n=basis.n, matrices=matrices, labels=basis.labels, kind=_ANTI_KIND[basis.kind])


def basis_coordinates(blocks, basis: HermitianBasis) -> np.ndarray:
    """Complex coefficients of every N x N block (last two axes) in the basis."""
    blocks = np.asarray(blocks, dtype=np.complex128)
    if blocks.shape[-2:] != (basis.n, basis.n):
        raise DimensionError(f"blocks must end in ({basis.n}, {basis.n}), got {blocks.shape}")
    if basis.is_orthonormal:
        return 2.0 * np.einsum('...ab,mba->...m', blocks, basis.matrices)
    columns = basis.matrices.reshape(basis.dim, basis.dim).T
    flat = blocks.reshape(-1, basis.dim).T
    solution = scipy.linalg.lstsq(columns, flat)[0]
    return solution.T.reshape(blocks.shape[:-2] + (basis.dim,))


def expand_complex_in_basis(a, basis: HermitianBasis) -> np.ndarray:
    """Complex coefficients c with a = sum c[m] h^m."""
    arr = as_matrix(a)
    coefficients = basis_coordinates(arr, basis)
    residual = max_residual(basis.combine(coefficients), arr)
    if residual > LIBRARY_TOLERANCE * max(1.0, max_residual(arr)):
        raise DimensionError(f"matrix is not in the span of the basis (residual {residual:.3e})")
    return coefficients


def expand_in_basis(a, basis: HermitianBasis, tol: float = STRICT_TOLERANCE) -> np.ndarray:
    """Real coefficients of a hermitian matrix."""
    coefficients = expand_complex_in_basis(a, basis)
    try:
        return real_part(coefficients, tol)
    except ImaginaryResidueError as e:
        raise ImaginaryResidueError(f"input is not hermitian: {e}") from e


def verify_orthonormality(basis: HermitianBasis, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    residual = max_residual(basis.gram, np.eye(basis.dim))
    return VerificationRecord.evaluate("basis.orthonormality", residual, tol)


def verify_traces(basis: HermitianBasis, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    """Every non-time matrix is traceless and tr(h^t) = sqrt(N/2)."""
    traces = np.einsum('maa->m', basis.matrices)
    expected = np.zeros(basis.dim)
    expected[basis.time_index] = np.sqrt(basis.n / 2.0)
    return VerificationRecord.evaluate("basis.traces", max_residual(traces, expected), tol)


def verify_hermiticity(basis: HermitianBasis, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    residual = max_residual(basis.matrices, np.conj(np.swapaxes(basis.matrices, 1, 2)))
    return VerificationRecord.evaluate("basis.hermiticity", residual, tol)


def spacetime_subspace_indices(n: int) -> Tuple[int, int, int, int]:
    """Zero-based indices of (+,12), (-,12), (0,22) and time: the 3+1 subspace."""
    if n < 2:
        raise DimensionError(f"the 3+1 subspace needs N >= 2, got {n}")
    labels = utility_labels(n)
    wanted = (BasisLabel("plus", 1, 2), BasisLabel("minus", 1, 2),
              BasisLabel("diag", 2, 2), BasisLabel("time", 1, 1))
    return tuple(labels.index(label) for label in wanted)


@dataclass(frozen=True, eq=False)
class BasisChange:
    """Real invertible N^2 x N^2 matrix acting as h' = R h."""

    r: np.ndarray
    r_inverse: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    @classmethod
    def from_matrix(cls, r, tol: float = STRICT_TOLERANCE) -> "BasisChange":
        arr = np.asarray(r)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"basis change must be square, got shape {arr.shape}")
        arr = real_part(arr, tol)
        if not np.all(np.isfinite(arr)):
            raise SingularMatrixError("basis change has non-finite entries")
        condition = np.linalg.cond(arr)
        if not np.isfinite(condition) or condition > 1.0 / STRICT_TOLERANCE:
            raise SingularMatrixError(f"basis change is singular (condition number {condition:.3e})")
        try:
            inverse = scipy.linalg.inv(arr)
        except np.linalg.LinAlgError as e:
            raise SingularMatrixError(f"basis change is singular: {e}") from e
        arr.setflags(write=False)
        inverse.setflags(write=False)
        return cls(r=arr, r_inverse=inverse)

    @classmethod
    def identity(cls, dim: int) -> "BasisChange":
        return cls.from_matrix(np.eye(dim))

    @classmethod
    def permutation(cls, dim: int, i: int, j: int) -> "BasisChange":
        """Swap basis elements i and j."""
        perm = np.eye(dim)
        perm[[i, j]] = perm[[j, i]]
        return cls.from_matrix(perm)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, orthogonal: bool = False,
               max_condition: float = 1e3) -> "BasisChange":
        """Random real basis change; orthogonal ones come from a QR factorization."""
        while True:
            gaussian = rng.standard_normal((dim, dim))
            if orthogonal:
                q, r = np.linalg.qr(gaussian)
                return cls.from_matrix(q * np.sign(np.diag(r)))
            candidate = gaussian + np.sqrt(dim) * np.eye(dim)
            singular = np.linalg.svd(candidate, compute_uv=False)
            if singular[-1] >= max_condition ** -0.5 and singular[0] <= max_condition * singular[-1]:
                return cls.from_matrix(candidate)


def apply_basis_change(basis: HermitianBasis, change: BasisChange) -> HermitianBasis:
    """h'^m = sum_s R[m, s] h^s."""
    if change.dim != basis.dim:
        raise DimensionError(f"basis change has size {change.dim}, basis has {basis.dim} matrices")
    matrices = np.einsum('ms,sab->mab', change.r, basis.matrices)
    return HermitianBasis(n=basis.n, matrices=matrices, labels=basis.labels, kind="primed")


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random hermitian matrix; used by property checks."""
    raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (raw + raw.conj().T) / 2
