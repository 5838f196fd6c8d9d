"""
Momentum matrices of combined representations (A, B) + (C, D).

A representation (A, B) of the Lorentz-Weyl part is built from two
representations of the unitary algebra:

    J_AB = J_A x 1 + 1 x J_B        K_AB = -i (J_A x 1 - 1 x J_B)

Momentum matrices live in one off-diagonal block of the block-diagonal
J, K on (A, B) + (C, D); they are the nullspace of the linear system given
by the [P, J] and [P, K] relations.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
import scipy.linalg

from .algebra import build_n2_generators, check_eps_p, lorentz_weyl_residuals, GeneratorSetN2
from .basis import BasisChange, HermitianBasis, anti_rep, apply_basis_change
from .config import FACTORIZATION_TOLERANCE, LIBRARY_TOLERANCE, REP_FACTORS
from .errors import (DimensionError, FactorizationError, ParameterError,
                     RepresentationError, SingularMatrixError)
from .linalg import (identity_stack, kron_stack, max_residual, nullspace_matrix, numerical_rank,
                     pair_commutators)
from .report import VerificationRecord, VerificationReport
from .structure import (StructureConstants, compute_structure_constants, solve_structure_constants,
                        transform_structure_constants)

logger = logging.getLogger(__name__)

RepPair = Tuple[str, str]


@dataclass(frozen=True, eq=False)
class CombinedRep:
    """Generators J_AB, K_AB as (N^2, dim, dim) stacks."""

    dim_a: int
    dim_b: int
    j_ab: np.ndarray
    k_ab: np.ndarray
    name: str = ""

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


@dataclass(frozen=True, eq=False)
class SimilarityMap:
    """S with S[l, s] = h^s[m, n] for l = N m + n."""

    s: np.ndarray
    s_inverse: np.ndarray


@dataclass(frozen=True, eq=False)
class MomentumSolution:
    """Orthonormal basis of momentum families; solutions[i] is an (N^2, D, D) stack."""

    solutions: np.ndarray
    block_side: str
    eps_p: int
    dims: Tuple[int, int, int, int]

    @property
    def basis_dim(self) -> int:
        return self.solutions.shape[0]

    @property
    def dim_ab(self) -> int:
        return self.dims[0] * self.dims[1]

    @property
    def dim_cd(self) -> int:
        return self.dims[2] * self.dims[3]

    @property
    def p_matrices(self) -> np.ndarray:
        """First basis solution, or an empty stack when there is none."""
        if self.basis_dim == 0:
            return np.zeros((0,) + self.solutions.shape[2:], dtype=np.complex128)
        return self.solutions[0]

    def side_blocks(self) -> np.ndarray:
        """Off-diagonal blocks X^m of every solution, shape (k, N^2, rows, cols)."""
        m = self.dim_ab
        if self.block_side == "upper":
            return self.solutions[:, :, :m, m:]
        return self.solutions[:, :, m:, :m]


# ==============================================================================
# FACTOR REPRESENTATIONS
# ==============================================================================


def _pair_isometry(n: int, antisymmetric: bool) -> np.ndarray:
    """Real (n^2, r) isometry onto the symmetric or antisymmetric part of C^n x C^n."""
    columns = []
    for a in range(n):
        for b in range(a, n):
            column = np.zeros(n * n)
            if a == b:
                if antisymmetric:
                    continue
                column[a * n + a] = 1.0
            else:
                column[a * n + b] = 1.0 / np.sqrt(2.0)
                column[b * n + a] = (-1.0 if antisymmetric else 1.0) / np.sqrt(2.0)
            columns.append(column)
    return np.stack(columns, axis=1) if columns else np.zeros((n * n, 0))


def tensor_rep(ja: np.ndarray, jb: np.ndarray) -> np.ndarray:
    """J_A x 1 + 1 x J_B."""
    return (kron_stack(ja, identity_stack(ja.shape[0], jb.shape[1]))
            + kron_stack(identity_stack(jb.shape[0], ja.shape[1]), jb))


def build_factor(name: str, basis: HermitianBasis) -> np.ndarray:
    """Generators of a named unitary-algebra representation as an (N^2, r, r) stack."""
    if name not in REP_FACTORS:
        raise RepresentationError(f"unknown representation {name!r}; expected one of {', '.join(REP_FACTORS)}")
    if name == "trivial":
        return np.zeros((basis.dim, 1, 1), dtype=np.complex128)
    h = anti_rep(basis).matrices if name.endswith("bar") or name == "antifund" else basis.matrices
    if name in ("fund", "antifund"):
        return np.array(h)
    isometry = _pair_isometry(basis.n, antisymmetric=name.startswith("antisym"))
    if isometry.shape[1] == 0:
        raise RepresentationError(f"{name} is empty for N={basis.n}")
    return np.einsum('ia,mij,jb->mab', isometry, tensor_rep(h, h), isometry)


def verify_fundamental(j: np.ndarray, sc: StructureConstants, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    """[J^m, J^n] = i f^{mns} J^s."""
    if j.ndim != 3 or j.shape[0] != sc.dim or j.shape[1] != j.shape[2]:
        raise DimensionError(f"expected an ({sc.dim}, r, r) stack, got shape {j.shape}")
    residual = max_residual(pair_commutators(j, j), 1j * np.einsum('mns,sab->mnab', sc.f, j))
    return VerificationRecord.evaluate("momentum.fundamental", residual, tol)


def combine_reps(ja: np.ndarray, jb: np.ndarray, sc: StructureConstants,
                 tol: float = LIBRARY_TOLERANCE, name: str = "") -> CombinedRep:
    """The (A, B) representation of the Lorentz-Weyl algebra."""
    for label, stack in (("A", ja), ("B", jb)):
        record = verify_fundamental(np.asarray(stack, dtype=np.complex128), sc, tol)
        if not record.passed:
            raise RepresentationError(f"{label} is not a representation (residual {record.residual:.3e})")
    ja = np.asarray(ja, dtype=np.complex128)
    jb = np.asarray(jb, dtype=np.complex128)
    left = kron_stack(ja, identity_stack(sc.dim, jb.shape[1]))
    right = kron_stack(identity_stack(sc.dim, ja.shape[1]), jb)
    j_ab = left + right
    k_ab = -1j * (left - right)
    worst = max(lorentz_weyl_residuals(j_ab, k_ab, sc.f).values())
    if worst > tol:
        raise RepresentationError(f"(A, B) fails the Lorentz-Weyl relations (residual {worst:.3e})")
    return CombinedRep(dim_a=ja.shape[1], dim_b=jb.shape[1], j_ab=j_ab, k_ab=k_ab, name=name)


def parse_rep_spec(text: str, eps_p: int = 1) -> Tuple[RepPair, RepPair]:
    """'C,D' pairs with (fund, antifund) for eps_p=+1 or (antifund, fund); 'A,B:C,D' names both."""
    eps_p = check_eps_p(eps_p)
    parts = [part.strip() for part in text.split(':')]
    if len(parts) == 1:
        default = ("fund", "antifund") if eps_p == 1 else ("antifund", "fund")
        parts = [",".join(default)] + parts
    if len(parts) != 2:
        raise RepresentationError(f"malformed representation spec {text!r}")
    pairs = []
    for part in parts:
        names = tuple(name.strip() for name in part.split(','))
        if len(names) != 2:
            raise RepresentationError(f"expected two factor names in {part!r}")
        for name in names:
            if name not in REP_FACTORS:
                raise RepresentationError(f"unknown representation {name!r} in {text!r}")
        pairs.append(names)
    return pairs[0], pairs[1]


def build_combined(pair: RepPair, basis: HermitianBasis, sc: StructureConstants,
                   tol: float = LIBRARY_TOLERANCE) -> CombinedRep:
    return combine_reps(build_factor(pair[0], basis), build_factor(pair[1], basis), sc, tol,
                        name=f"({pair[0]},{pair[1]})")


# ==============================================================================
# SIMILARITY MAP
# ==============================================================================


def _similarity_targets(basis: HermitianBasis, eps_p: int) -> Tuple[np.ndarray, np.ndarray]:
    h = basis.matrices
    h_bar = anti_rep(basis).matrices
    left = kron_stack(h, identity_stack(basis.dim, basis.n))
    right = kron_stack(identity_stack(basis.dim, basis.n), h_bar)
    return left + right, -eps_p * 1j * (left - right)


def verify_similarity(sim: SimilarityMap, basis: HermitianBasis, gn2: GeneratorSetN2,
                      tol: float = LIBRARY_TOLERANCE, prefix: str = "similarity") -> VerificationReport:
    """S j^m = (h^m x 1 + 1 x hbar^m) S and S k^m = -eps_p i (h^m x 1 - 1 x hbar^m) S."""
    target_j, target_k = _similarity_targets(basis, gn2.eps_p)
    report = VerificationReport()
    report.add(f"{prefix}.j", max_residual(sim.s @ gn2.j, target_j @ sim.s), tol)
    report.add(f"{prefix}.k[eps_p={gn2.eps_p:+d}]", max_residual(sim.s @ gn2.k, target_k @ sim.s), tol)
    return report


def similarity_from_basis(basis: HermitianBasis) -> SimilarityMap:
    """S read off from the basis entries, without checking the intertwining identities."""
    if not basis.is_utility:
        raise RepresentationError("the similarity map is built from the utility basis")
    s = np.ascontiguousarray(basis.matrices.reshape(basis.dim, basis.dim).T)
    try:
        s_inverse = scipy.linalg.inv(s)
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"similarity map is singular: {e}") from e
    return SimilarityMap(s=s, s_inverse=s_inverse)


def build_similarity(basis: HermitianBasis, sc: StructureConstants,
                     tol: float = LIBRARY_TOLERANCE) -> SimilarityMap:
    """Similarity map from the N^2-rep to (N, Nbar); checked for both momentum families."""
    sim = similarity_from_basis(basis)
    for eps_p in (1, -1):
        report = verify_similarity(sim, basis, build_n2_generators(sc, eps_p), tol)
        if not report.passed:
            raise RepresentationError(f"similarity identities fail for eps_p={eps_p:+d}: "
                                      f"max residual {report.max_residual:.3e}")
    return sim


def swap_permutation(n: int) -> np.ndarray:
    """Permutation taking index N a + b to N b + a."""
    perm = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            perm[n * a + b, n * b + a] = 1.0
    return perm


def verify_equivalence(basis: HermitianBasis, sc: StructureConstants, eps_p: int = 1,
                       tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    """S j S^-1 and S k S^-1 reproduce (N, Nbar) for eps_p=+1, or swapped (Nbar, N) for -1."""
    eps_p = check_eps_p(eps_p)
    gn2 = build_n2_generators(sc, eps_p)
    sim = similarity_from_basis(basis)
    h, h_bar = build_factor("fund", basis), build_factor("antifund", basis)
    if eps_p == 1:
        rep = combine_reps(h, h_bar, sc, tol)
        j_target, k_target = rep.j_ab, rep.k_ab
    else:
        rep = combine_reps(h_bar, h, sc, tol)
        perm = swap_permutation(basis.n)
        j_target, k_target = perm @ rep.j_ab @ perm.T, perm @ rep.k_ab @ perm.T
    report = VerificationReport()
    report.add(f"similarity.equivalence.j[eps_p={eps_p:+d}]",
               max_residual(sim.s @ gn2.j @ sim.s_inverse, j_target), tol)
    report.add(f"similarity.equivalence.k[eps_p={eps_p:+d}]",
               max_residual(sim.s @ gn2.k @ sim.s_inverse, k_target), tol)
    return report


def basis_change_covariance(basis: HermitianBasis, change: BasisChange, eps_p: int = 1,
                            tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    """Structure constants, generators and similarity map transform consistently under h' = R h."""
    eps_p = check_eps_p(eps_p)
    sc = compute_structure_constants(basis)
    primed = apply_basis_change(basis, change)
    formula = transform_structure_constants(sc, change)
    solved = solve_structure_constants(primed)

    report = VerificationReport()
    report.add("basis_change.structure_constants",
               max(max_residual(formula.f, solved.f), max_residual(formula.d, solved.d)), tol)

    gn2 = build_n2_generators(sc, eps_p)
    gn2_primed = build_n2_generators(formula, eps_p)
    r, r_inv = change.r, change.r_inverse
    j_rule = np.einsum('nr,ms,rst,tl->nml', r, r, gn2.j, r_inv, optimize=True)
    k_rule = np.einsum('nr,ms,rst,tl->nml', r, r, gn2.k, r_inv, optimize=True)
    report.add("basis_change.generators",
               max(max_residual(gn2_primed.j, j_rule), max_residual(gn2_primed.k, k_rule)), tol)
    report.add("basis_change.lorentz_weyl",
               max(lorentz_weyl_residuals(gn2_primed.j, gn2_primed.k, formula.f).values()), tol)

    sim = build_similarity(basis, sc, tol)
    sim_primed = SimilarityMap(s=sim.s @ r_inv, s_inverse=r @ sim.s_inverse)
    report.extend(verify_similarity(sim_primed, primed, gn2_primed, tol, prefix="basis_change.similarity").records)
    return report


# ==============================================================================
# MOMENTUM SOLVER
# ==============================================================================


def _constraint_blocks(left: CombinedRep, right: CombinedRep, gn2: GeneratorSetN2) -> Iterable[np.ndarray]:
    """Per-generator blocks acting on vec(X^m), row-major over (m, row, col)."""
    m, n = left.dim, right.dim
    eye_mn = np.eye(m * n)
    eye_dim = np.eye(gn2.dim)
    for nu in range(gn2.dim):
        for rep_l, rep_r, coeff in ((left.j_ab, right.j_ab, gn2.j), (left.k_ab, right.k_ab, gn2.k)):
            action = np.kron(np.eye(m), rep_r[nu].T) - np.kron(rep_l[nu], np.eye(n))
            yield np.kron(eye_dim, action) - np.kron(coeff[nu], eye_mn)


def _stacked_factor(blocks: Iterable[np.ndarray]) -> np.ndarray:
    """Triangular factor with the same singular values as the stacked blocks."""
    factor = None
    for block in blocks:
        stacked = block if factor is None else np.vstack([factor, block])
        factor = scipy.linalg.qr(stacked, mode='r')[0]
        factor = factor[:min(factor.shape)]
    return factor


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    pivot = vector[int(np.argmax(np.abs(vector)))]
    return vector * (abs(pivot) / pivot)


def solve_momentum(rep_ab: CombinedRep, rep_cd: CombinedRep, sc: StructureConstants, eps_p: int = 1,
                   side: str = "upper", tol: float = LIBRARY_TOLERANCE) -> MomentumSolution:
    """Every momentum family supported in one off-diagonal block of (A, B) + (C, D)."""
    eps_p = check_eps_p(eps_p)
    if side not in ("upper", "lower"):
        raise ParameterError(f"block side must be 'upper' or 'lower', got {side!r}")
    for rep in (rep_ab, rep_cd):
        if rep.j_ab.shape[0] != sc.dim:
            raise DimensionError(f"representation has {rep.j_ab.shape[0]} generators, expected {sc.dim}")

    gn2 = build_n2_generators(sc, eps_p)
    left, right = (rep_ab, rep_cd) if side == "upper" else (rep_cd, rep_ab)
    rows, cols = left.dim, right.dim
    factor = _stacked_factor(_constraint_blocks(left, right, gn2))
    null = nullspace_matrix(factor, tol)

    total = rep_ab.dim + rep_cd.dim
    solutions = np.zeros((null.shape[1], sc.dim, total, total), dtype=np.complex128)
    for i in range(null.shape[1]):
        blocks = _fix_phase(null[:, i]).reshape(sc.dim, rows, cols)
        if side == "upper":
            solutions[i, :, :rows, rows:] = blocks
        else:
            solutions[i, :, rep_ab.dim:, :rep_ab.dim] = blocks

    logger.info(f"🧮 Momentum solution space for {rep_ab.name or 'AB'}+{rep_cd.name or 'CD'} "
                f"({side}, eps_p={eps_p:+d}): dimension {null.shape[1]}")
    return MomentumSolution(solutions=solutions, block_side=side, eps_p=eps_p,
                            dims=(rep_ab.dim_a, rep_ab.dim_b, rep_cd.dim_a, rep_cd.dim_b))


def block_diagonal(rep_ab: CombinedRep, rep_cd: CombinedRep) -> Tuple[np.ndarray, np.ndarray]:
    """J and K of (A, B) + (C, D)."""
    m, total = rep_ab.dim, rep_ab.dim + rep_cd.dim
    j = np.zeros((rep_ab.j_ab.shape[0], total, total), dtype=np.complex128)
    k = np.zeros_like(j)
    j[:, :m, :m], j[:, m:, m:] = rep_ab.j_ab, rep_cd.j_ab
    k[:, :m, :m], k[:, m:, m:] = rep_ab.k_ab, rep_cd.k_ab
    return j, k


def verify_momentum_solution(solution: MomentumSolution, rep_ab: CombinedRep, rep_cd: CombinedRep,
                             sc: StructureConstants, tol: float = LIBRARY_TOLERANCE,
                             prefix: str = "momentum") -> VerificationReport:
    """Every basis solution satisfies [P, J], [P, K] and [P, P] = 0."""
    j, k = block_diagonal(rep_ab, rep_cd)
    worst = {"[P,J]": 0.0, "[P,K]": 0.0, "[P,P]": 0.0}
    for p in solution.solutions:
        worst["[P,J]"] = max(worst["[P,J]"], max_residual(
            pair_commutators(p, j), 1j * np.einsum('mns,sab->mnab', sc.f, p)))
        worst["[P,K]"] = max(worst["[P,K]"], max_residual(
            pair_commutators(p, k), -solution.eps_p * 1j * np.einsum('mns,sab->mnab', sc.d, p)))
        worst["[P,P]"] = max(worst["[P,P]"], max_residual(pair_commutators(p, p)))
    report = VerificationReport()
    for family, residual in worst.items():
        report.add(f"{prefix}.{family}", residual, tol)
    return report


def projection_residual(solution: MomentumSolution, target: np.ndarray) -> float:
    """Relative distance of a momentum family from the span of the solutions."""
    target = np.asarray(target, dtype=np.complex128).ravel()
    norm = np.linalg.norm(target)
    if norm == 0:
        return 0.0
    if solution.basis_dim == 0:
        return 1.0
    q = solution.solutions.reshape(solution.basis_dim, -1).T
    return float(np.linalg.norm(target - q @ (q.conj().T @ target)) / norm)


def cg_factorization_check(solution: MomentumSolution, sim: SimilarityMap,
                           tol: float = FACTORIZATION_TOLERANCE, prefix: str = "cg") -> VerificationReport:
    """Rank-one test of the momentum tensor after the similarity map.

    Records the singular value ratio s2/s1 and the numerical rank at the same cutoff.

    For eps_p=+1 the tensor factors over (l1, first factors) x (l0, second factors);
    for eps_p=-1 the roles of l1 and l0 swap.
    """
    if solution.basis_dim != 1:
        raise FactorizationError(f"factorization needs a one-dimensional solution space, got {solution.basis_dim}")
    blocks = solution.side_blocks()[0]
    n = int(round(np.sqrt(blocks.shape[0])))
    rotated = np.einsum('lm,mrc->lrc', sim.s, blocks)
    da, db, dc, dd = solution.dims
    if solution.block_side == "upper":
        row_dims, col_dims = (da, db), (dc, dd)
    else:
        row_dims, col_dims = (dc, dd), (da, db)
    tensor = rotated.reshape(n, n, row_dims[0], row_dims[1], col_dims[0], col_dims[1])
    if solution.eps_p == 1:
        grouped = tensor.transpose(0, 2, 4, 1, 3, 5)
    else:
        grouped = tensor.transpose(1, 2, 4, 0, 3, 5)
    matrix = grouped.reshape(n * row_dims[0] * col_dims[0], n * row_dims[1] * col_dims[1])
    rank, singular_values = numerical_rank(matrix, tol)
    ratio = float(singular_values[1] / singular_values[0]) if singular_values.size > 1 else 0.0
    report = VerificationReport()
    report.add(f"{prefix}.rank_one", ratio, tol)
    report.add(f"{prefix}.numerical_rank", abs(rank - 1), 0.0)
    return report
