"""
Generators of the N-Poincare-Weyl algebra in two representations.

2N-rep: J = diag(h, h), K = diag(ih, -ih) and nilpotent momenta
P+ = [[0, c h], [0, 0]] (eps_p = +1) or P- = [[0, 0], [c h, 0]] (eps_p = -1).

N^2-rep: (j^l)[m, n] = i f^{m l n} and (k^l)[m, n] = -eps_p i d^{m l n},
recovered from the 2N-rep by the copy-cat principle: the coefficient of
P^n in [P^m, A^l] is the (m, n) entry of A^l in the N^2-rep.
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .basis import HermitianBasis, basis_coordinates
from .config import LIBRARY_TOLERANCE
from .errors import CopyCatError, DimensionError, ParameterError
from .linalg import max_residual, pair_commutators
from .report import VerificationRecord, VerificationReport
from .structure import StructureConstants

logger = logging.getLogger(__name__)


def check_eps_p(eps_p: int) -> int:
    if eps_p not in (1, -1):
        raise ParameterError(f"eps_p must be +1 or -1, got {eps_p}")
    return int(eps_p)


@dataclass(frozen=True, eq=False)
class GeneratorSet2N:
    """Stacks of (N^2, 2N, 2N) generator matrices built from one basis."""

    basis: HermitianBasis
    eps_p: int
    j2n: np.ndarray
    k2n: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray
    c_plus: complex
    c_minus: complex

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def momentum(self) -> np.ndarray:
        """The momentum family selected by eps_p."""
        return self.p_plus if self.eps_p == 1 else self.p_minus

    @property
    def c(self) -> complex:
        return self.c_plus if self.eps_p == 1 else self.c_minus

    def momentum_block(self, stack: np.ndarray) -> np.ndarray:
        """The off-diagonal block where this family's momenta live."""
        n = self.n
        if self.eps_p == 1:
            return stack[..., :n, n:]
        return stack[..., n:, :n]


@dataclass(frozen=True, eq=False)
class GeneratorSetN2:
    """Stacks j, k of (N^2, N^2, N^2) matrices; j[l] and k[l] act on the momentum label."""

    n: int
    eps_p: int
    j: np.ndarray
    k: np.ndarray

    @property
    def dim(self) -> int:
        return self.n * self.n


def build_2n_generators(basis: HermitianBasis, eps_p: int = 1, c: complex = 1.0) -> GeneratorSet2N:
    eps_p = check_eps_p(eps_p)
    if c == 0:
        raise ParameterError("momentum scale c must be nonzero")
    n, h = basis.n, basis.matrices
    zeros = np.zeros((basis.dim, 2 * n, 2 * n), dtype=np.complex128)

    j2n = zeros.copy()
    j2n[:, :n, :n] = h
    j2n[:, n:, n:] = h

    k2n = zeros.copy()
    k2n[:, :n, :n] = 1j * h
    k2n[:, n:, n:] = -1j * h

    p_plus = zeros.copy()
    p_minus = zeros.copy()
    c_plus = complex(c) if eps_p == 1 else 0j
    c_minus = complex(c) if eps_p == -1 else 0j
    if eps_p == 1:
        p_plus[:, :n, n:] = c * h
    else:
        p_minus[:, n:, :n] = c * h

    return GeneratorSet2N(basis=basis, eps_p=eps_p, j2n=j2n, k2n=k2n, p_plus=p_plus, p_minus=p_minus,
                          c_plus=c_plus, c_minus=c_minus)


def build_n2_generators(sc: StructureConstants, eps_p: int = 1) -> GeneratorSetN2:
    eps_p = check_eps_p(eps_p)
    j = 1j * np.transpose(sc.f, (1, 0, 2))
    k = -eps_p * 1j * np.transpose(sc.d, (1, 0, 2))
    return GeneratorSetN2(n=sc.n, eps_p=eps_p, j=j.astype(np.complex128), k=k.astype(np.complex128))


def poincare_weyl_residuals(j: np.ndarray, k: np.ndarray, p: np.ndarray, sc: StructureConstants,
                            eps_p: int) -> Dict[str, float]:
    """Largest deviation per commutator family for generator stacks j, k, p."""
    f, d = sc.f, sc.d

    def expand(coefficients, stack):
        return np.einsum('mns,sab->mnab', coefficients, stack)

    return {
        "[J,J]": max_residual(pair_commutators(j, j), 1j * expand(f, j)),
        "[J,K]": max_residual(pair_commutators(j, k), 1j * expand(f, k)),
        "[K,K]": max_residual(pair_commutators(k, k), -1j * expand(f, j)),
        "[P,J]": max_residual(pair_commutators(p, j), 1j * expand(f, p)),
        "[P,K]": max_residual(pair_commutators(p, k), -eps_p * 1j * expand(d, p)),
        "[P,P]": max_residual(pair_commutators(p, p)),
    }


def lorentz_weyl_residuals(j: np.ndarray, k: np.ndarray, f: np.ndarray) -> Dict[str, float]:
    def expand(stack):
        return np.einsum('mns,sab->mnab', f, stack)

    return {
        "[J,J]": max_residual(pair_commutators(j, j), 1j * expand(j)),
        "[J,K]": max_residual(pair_commutators(j, k), 1j * expand(k)),
        "[K,K]": max_residual(pair_commutators(k, k), -1j * expand(j)),
    }


def _check_sizes(n_left: int, n_right: int):
    if n_left != n_right:
        raise DimensionError(f"generators are for N={n_left} but structure constants for N={n_right}")


def verify_poincare_weyl(g2n: GeneratorSet2N, sc: StructureConstants,
                         tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    _check_sizes(g2n.n, sc.n)
    residuals = poincare_weyl_residuals(g2n.j2n, g2n.k2n, g2n.momentum, sc, g2n.eps_p)
    report = VerificationReport()
    for family, residual in residuals.items():
        report.add(f"poincare_weyl.{family}", residual, tol)
    return report


def verify_lorentz_weyl(gn2: GeneratorSetN2, sc: StructureConstants,
                        tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    _check_sizes(gn2.n, sc.n)
    report = VerificationReport()
    for family, residual in lorentz_weyl_residuals(gn2.j, gn2.k, sc.f).items():
        report.add(f"lorentz_weyl.{family.lower()}", residual, tol)
    return report


def _copycat_coefficients(g2n: GeneratorSet2N, generators: np.ndarray, tol: float) -> np.ndarray:
    """Stack A with A[l, m, n] = coefficient of P^n in [P^m, generators^l] / c."""
    p = g2n.momentum
    commutators = pair_commutators(p, generators)
    block = g2n.momentum_block(commutators) / g2n.c
    coefficients = basis_coordinates(block, g2n.basis)

    rebuilt = np.einsum('mln,nab->mlab', coefficients, g2n.momentum_block(p))
    outside = commutators.copy()
    g2n.momentum_block(outside)[...] = 0
    residual = max(max_residual(g2n.momentum_block(commutators), rebuilt), max_residual(outside))
    if residual > tol:
        raise CopyCatError(f"commutator left the momentum span (residual {residual:.3e})")
    return np.transpose(coefficients, (1, 0, 2))


def extract_copycat(g2n: GeneratorSet2N, tol: float = LIBRARY_TOLERANCE) -> GeneratorSetN2:
    """N^2-rep generators read off from commutators with the momenta."""
    j = _copycat_coefficients(g2n, g2n.j2n, tol)
    k = _copycat_coefficients(g2n, g2n.k2n, tol)
    logger.debug(f"🪞 Extracted copy-cat generators for N={g2n.n}, eps_p={g2n.eps_p:+d}")
    return GeneratorSetN2(n=g2n.n, eps_p=g2n.eps_p, j=j, k=k)


def verify_copycat(g2n: GeneratorSet2N, gn2: GeneratorSetN2,
                   tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    """Copy-cat extraction agrees with the generators built from f and d."""
    extracted = extract_copycat(g2n, tol)
    residual = max(max_residual(extracted.j, gn2.j), max_residual(extracted.k, gn2.k))
    return VerificationRecord.evaluate("algebra.copycat_extraction", residual, tol)


def verify_copycat_identity(g2n: GeneratorSet2N, sc: StructureConstants,
                            tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    """[P^r, [A^m, B^n]] agrees with the coefficient expansion for every A, B in {J, K}."""
    _check_sizes(g2n.n, sc.n)
    eps_p = g2n.eps_p
    p = g2n.momentum
    generators = {"J": (g2n.j2n, 1j * sc.f), "K": (g2n.k2n, -eps_p * 1j * sc.d)}
    report = VerificationReport()
    for name_a, (stack_a, coeff_a) in generators.items():
        for name_b, (stack_b, coeff_b) in generators.items():
            inner = pair_commutators(stack_a, stack_b)
            worst = 0.0
            for r in range(sc.dim):
                lhs = p[r] @ inner - inner @ p[r]
                coefficients = (np.einsum('ms,snt->mnt', coeff_a[r], coeff_b)
                                - np.einsum('ns,smt->mnt', coeff_b[r], coeff_a))
                rhs = np.einsum('mnt,tab->mnab', coefficients, p)
                worst = max(worst, max_residual(lhs, rhs))
            report.add(f"algebra.copycat_identity.[P,[{name_a},{name_b}]]", worst, tol)
    return report


def verify_generator_pattern(gn2: GeneratorSetN2, tol: float = LIBRARY_TOLERANCE) -> VerificationRecord:
    """j hermitian and traceless, k antihermitian, j^t = 0 and k^t = -eps_p i sqrt(2/N) I."""
    j, k = gn2.j, gn2.k
    t = gn2.dim - 1
    residual = max(
        max_residual(j, np.conj(np.swapaxes(j, 1, 2))),
        max_residual(k, -np.conj(np.swapaxes(k, 1, 2))),
        max_residual(np.einsum('maa->m', j)),
        max_residual(j[t]),
        max_residual(k[t], -gn2.eps_p * 1j * np.sqrt(2.0 / gn2.n) * np.eye(gn2.dim)),
    )
    return VerificationRecord.evaluate("algebra.generator_pattern", residual, tol)
