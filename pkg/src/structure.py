"""
Structure constants f and d of a hermitian basis:

    [h^m, h^n] = i f^{mns} h^s        {h^m, h^n} = d^{mns} h^s
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Tuple

import numpy as np

from .basis import BasisChange, HermitianBasis, anti_rep, basis_coordinates
from .config import LIBRARY_TOLERANCE, STRICT_TOLERANCE
from .errors import DimensionError, NonOrthonormalBasisError, RepresentationError
from .linalg import max_residual, pair_anticommutators, pair_commutators, real_part
from .report import VerificationRecord, VerificationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Real (N^2, N^2, N^2) tensors f and d."""

    n: int
    f: np.ndarray
    d: np.ndarray
    utility_rep: bool = True

    def __post_init__(self):
        dim = self.n * self.n
        for name in ("f", "d"):
            tensor = np.array(getattr(self, name), dtype=np.float64)
            if tensor.shape != (dim, dim, dim):
                raise DimensionError(f"{name} must have shape {(dim, dim, dim)}, got {tensor.shape}")
            tensor.setflags(write=False)
            object.__setattr__(self, name, tensor)

    @property
    def dim(self) -> int:
        return self.n * self.n

    @property
    def time_index(self) -> int:
        return self.dim - 1


def compute_structure_constants(basis: HermitianBasis, tol: float = STRICT_TOLERANCE) -> StructureConstants:
    """Trace formulas f = -2i tr([h, h] h), d = 2 tr({h, h} h); needs an orthonormal basis."""
    if not basis.is_orthonormal:
        raise NonOrthonormalBasisError("trace extraction needs 2 tr(h^m h^n) = delta; "
                                       "use solve_structure_constants instead")
    h = basis.matrices
    f = -2j * np.einsum('mlab,nba->mln', pair_commutators(h, h), h)
    d = 2.0 * np.einsum('mlab,nba->mln', pair_anticommutators(h, h), h)
    return StructureConstants(n=basis.n, f=real_part(f, tol), d=real_part(d, tol),
                              utility_rep=basis.is_utility)


def solve_structure_constants(basis: HermitianBasis, tol: float = LIBRARY_TOLERANCE) -> StructureConstants:
    """Expand every commutator and anticommutator in the basis; works for any basis."""
    h = basis.matrices
    f = basis_coordinates(-1j * pair_commutators(h, h), basis)
    d = basis_coordinates(pair_anticommutators(h, h), basis)
    return StructureConstants(n=basis.n, f=real_part(f, tol), d=real_part(d, tol),
                              utility_rep=basis.is_utility)


def structure_constants_for(basis: HermitianBasis) -> StructureConstants:
    if basis.is_orthonormal:
        return compute_structure_constants(basis)
    return solve_structure_constants(basis)


def transform_structure_constants(sc: StructureConstants, change: BasisChange) -> StructureConstants:
    """f'^{amn} = R[a,s] R[m,r] f^{srt} R^-1[t,n], and the same for d."""
    if change.dim != sc.dim:
        raise DimensionError(f"basis change has size {change.dim}, structure constants {sc.dim}")
    r, r_inv = change.r, change.r_inverse
    f = np.einsum('as,mr,srt,tn->amn', r, r, sc.f, r_inv, optimize=True)
    d = np.einsum('as,mr,srt,tn->amn', r, r, sc.d, r_inv, optimize=True)
    return StructureConstants(n=sc.n, f=f, d=d, utility_rep=False)


def perturb(sc: StructureConstants, index: Tuple[int, int, int] = (0, 0, 0),
            delta: float = 1e-3) -> StructureConstants:
    """Copy of sc with d[index] shifted by delta; used for fault injection."""
    d = np.array(sc.d)
    d[index] += delta
    logger.warning(f"⚠️ Perturbed d{list(index)} by {delta:g}")
    return StructureConstants(n=sc.n, f=sc.f, d=d, utility_rep=sc.utility_rep)


def closure_residuals(basis: HermitianBasis, sc: StructureConstants) -> Tuple[float, float]:
    """Largest deviation from the commutator and anticommutator expansions."""
    if basis.n != sc.n:
        raise DimensionError(f"basis N={basis.n} but structure constants N={sc.n}")
    h = basis.matrices
    commutator_rhs = 1j * np.einsum('mns,sab->mnab', sc.f, h)
    anticommutator_rhs = np.einsum('mns,sab->mnab', sc.d, h)
    return (max_residual(pair_commutators(h, h), commutator_rhs),
            max_residual(pair_anticommutators(h, h), anticommutator_rhs))


def verify_closure(basis: HermitianBasis, sc: StructureConstants,
                   tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    commutator_residual, anticommutator_residual = closure_residuals(basis, sc)
    report = VerificationReport()
    report.add("structure.closure.commutator", commutator_residual, tol)
    report.add("structure.closure.anticommutator", anticommutator_residual, tol)
    return report


def verify_anti_rep(basis: HermitianBasis, sc: StructureConstants,
                    tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    """The anti-representation shares f and carries -d."""
    h = anti_rep(basis).matrices
    report = VerificationReport()
    report.add("structure.anti_rep.commutator",
               max_residual(pair_commutators(h, h), 1j * np.einsum('mns,sab->mnab', sc.f, h)), tol)
    report.add("structure.anti_rep.anticommutator",
               max_residual(pair_anticommutators(h, h), -np.einsum('mns,sab->mnab', sc.d, h)), tol)
    return report


def symmetry_violation(sc: StructureConstants) -> float:
    """How far f is from totally antisymmetric and d from totally symmetric."""
    worst = 0.0
    for perm in permutations(range(3)):
        parity = np.linalg.det(np.eye(3)[list(perm)])
        worst = max(worst,
                    max_residual(sc.f, parity * np.transpose(sc.f, perm)),
                    max_residual(sc.d, np.transpose(sc.d, perm)))
    return worst


def pairwise_symmetry_violation(sc: StructureConstants) -> float:
    """Antisymmetry of f and symmetry of d in the first two indices; holds in every basis."""
    return max(max_residual(sc.f, -np.swapaxes(sc.f, 0, 1)),
               max_residual(sc.d, np.swapaxes(sc.d, 0, 1)))


def verify_symmetries(sc: StructureConstants, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    """Total (anti)symmetry; expected to fail outside the utility rep."""
    if not sc.utility_rep:
        logger.debug("Total symmetry is only guaranteed in the utility rep")
    return VerificationRecord.evaluate("structure.symmetries", symmetry_violation(sc), tol)


def verify_time_index(sc: StructureConstants, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    """f^{m t n} = 0 and d^{m t n} = sqrt(2/N) delta."""
    if not sc.utility_rep:
        raise RepresentationError("time-index identities are defined in the utility rep only")
    t = sc.time_index
    residual = max(max_residual(sc.f[:, t, :]),
                   max_residual(sc.d[:, t, :], np.sqrt(2.0 / sc.n) * np.eye(sc.dim)))
    return VerificationRecord.evaluate("structure.time_index", residual, tol)
