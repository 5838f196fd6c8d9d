"""
Events, finite transforms D = exp(i phi.k) exp(i theta.j) and the interval
(x^t)^2 - sum_i (x^i)^2 on the N^2-dimensional spacetime.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .algebra import GeneratorSet2N, GeneratorSetN2, check_eps_p
from .basis import spacetime_subspace_indices
from .config import LIBRARY_TOLERANCE, WITNESS_THRESHOLD
from .errors import DimensionError, ParameterError, SupportError
from .linalg import matrix_exp, max_residual, real_part
from .report import VerificationRecord, VerificationReport
from .structure import StructureConstants

logger = logging.getLogger(__name__)


def _real_vector(values, length: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.shape != (length,):
        raise DimensionError(f"{what} needs {length} reals, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Event:
    """Real coordinates x^m; the last entry is the time coordinate."""

    x: np.ndarray

    def __post_init__(self):
        arr = np.array(self.x, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DimensionError(f"event must be a non-empty vector, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, 'x', arr)

    @property
    def time(self) -> float:
        return float(self.x[-1])

    @property
    def spatial(self) -> np.ndarray:
        return self.x[:-1]

    @property
    def distance_squared(self) -> float:
        return float(np.dot(self.spatial, self.spatial))


@dataclass(frozen=True, eq=False)
class TransformParams:
    theta: np.ndarray
    phi: np.ndarray
    eps_p: int = 1

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64)
        phi = np.array(self.phi, dtype=np.float64)
        if theta.ndim != 1 or theta.shape != phi.shape:
            raise DimensionError(f"theta and phi must be equally long vectors, got {theta.shape} and {phi.shape}")
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'phi', phi)
        object.__setattr__(self, 'eps_p', check_eps_p(self.eps_p))

    @classmethod
    def zeros(cls, dim: int, eps_p: int = 1) -> "TransformParams":
        return cls(theta=np.zeros(dim), phi=np.zeros(dim), eps_p=eps_p)

    @classmethod
    def rotation(cls, theta: Sequence[float], eps_p: int = 1) -> "TransformParams":
        return cls(theta=theta, phi=np.zeros(len(theta)), eps_p=eps_p)

    @classmethod
    def boost(cls, phi: Sequence[float], eps_p: int = 1) -> "TransformParams":
        return cls(theta=np.zeros(len(phi)), phi=phi, eps_p=eps_p)


def interval(event: Event) -> float:
    """Spatial distance squared minus time squared."""
    return event.distance_squared - event.time ** 2


def _check_params(gn2: GeneratorSetN2, params: TransformParams):
    if params.theta.shape != (gn2.dim,):
        raise DimensionError(f"transform parameters need {gn2.dim} entries, got {params.theta.shape[0]}")
    if params.eps_p != gn2.eps_p:
        raise ParameterError(f"parameters are for eps_p={params.eps_p:+d}, generators for {gn2.eps_p:+d}")


def rotation_matrix(gn2: GeneratorSetN2, theta) -> np.ndarray:
    theta = _real_vector(theta, gn2.dim, "theta")
    return real_part(matrix_exp(1j * np.einsum('s,sab->ab', theta, gn2.j)), LIBRARY_TOLERANCE)


def boost_matrix(gn2: GeneratorSetN2, phi) -> np.ndarray:
    phi = _real_vector(phi, gn2.dim, "phi")
    return real_part(matrix_exp(1j * np.einsum('s,sab->ab', phi, gn2.k)), LIBRARY_TOLERANCE)


def build_transform(gn2: GeneratorSetN2, params: TransformParams) -> np.ndarray:
    """Real N^2 x N^2 matrix D = exp(i phi.k) exp(i theta.j)."""
    _check_params(gn2, params)
    return boost_matrix(gn2, params.phi) @ rotation_matrix(gn2, params.theta)


def transform_event(d: np.ndarray, event: Event) -> Event:
    d = np.asarray(d, dtype=np.float64)
    if d.ndim != 2 or d.shape != (event.x.size, event.x.size):
        raise DimensionError(f"transform of shape {d.shape} cannot act on an event of length {event.x.size}")
    return Event(d @ event.x)


def rotation_invariance_check(gn2: GeneratorSetN2, theta, event: Event) -> Tuple[float, float]:
    """Changes in distance squared and in time under a pure rotation."""
    moved = transform_event(rotation_matrix(gn2, theta), event)
    return (abs(moved.distance_squared - event.distance_squared), abs(moved.time - event.time))


def boost_interval_residual(gn2: GeneratorSetN2, phi, event: Event) -> float:
    """Change of the interval under a pure boost."""
    moved = transform_event(boost_matrix(gn2, phi), event)
    return abs(interval(moved) - interval(event))


def time_boost_scale(n: int, phi_t: float, eps_p: int = 1) -> float:
    """A boost along the time generator rescales every coordinate by this factor."""
    return float(np.exp(check_eps_p(eps_p) * phi_t * np.sqrt(2.0 / n)))


def _interval_quadratic_form(sc: StructureConstants, dphi: np.ndarray) -> np.ndarray:
    """Matrix M with first-order interval change 2 eps_p x.M.x."""
    t = sc.time_index
    form = np.einsum('r,irj->ij', dphi, sc.d)
    form[t, :] = 0.0
    form[:, t] = 0.0
    form[t, t] = -np.dot(dphi, sc.d[t, :, t])
    return form


def interval_first_order_change(sc: StructureConstants, dphi, event: Event, eps_p: int = 1) -> float:
    """d/ds of the interval of exp(i s dphi.k) x at s = 0."""
    eps_p = check_eps_p(eps_p)
    dphi = _real_vector(dphi, sc.dim, "dphi")
    x = _real_vector(event.x, sc.dim, "event")
    return float(2 * eps_p * x @ _interval_quadratic_form(sc, dphi) @ x)


def _subspace_dphi(sc: StructureConstants, dphi) -> np.ndarray:
    indices = spacetime_subspace_indices(sc.n)
    dphi = np.asarray(dphi, dtype=np.float64)
    if dphi.shape == (3,):
        full = np.zeros(sc.dim)
        full[list(indices[:3])] = dphi
        return full
    if dphi.shape != (sc.dim,):
        raise SupportError(f"dphi must have 3 or {sc.dim} entries, got shape {dphi.shape}")
    outside = np.delete(dphi, indices[:3])
    if np.any(outside != 0):
        raise SupportError("dphi has weight outside the spatial directions of the 3+1 subspace")
    return dphi


def subspace_invariance_check(sc: StructureConstants, event: Event, dphi, eps_p: int = 1) -> float:
    """First-order interval change for an event and boost confined to the 3+1 subspace."""
    indices = spacetime_subspace_indices(sc.n)
    x = _real_vector(event.x, sc.dim, "event")
    if np.any(np.delete(x, indices) != 0):
        raise SupportError("event has weight outside the 3+1 subspace")
    return interval_first_order_change(sc, _subspace_dphi(sc, dphi), event, eps_p)


def subspace_boost_leakage(gn2: GeneratorSetN2, event: Event, dphi) -> Tuple[float, float]:
    """Finite subspace boost: (interval change, weight leaked outside the subspace)."""
    indices = spacetime_subspace_indices(gn2.n)
    phi = np.zeros(gn2.dim)
    phi[list(indices[:3])] = _real_vector(dphi, 3, "dphi")
    moved = transform_event(boost_matrix(gn2, phi), event)
    leaked = float(np.linalg.norm(np.delete(moved.x, indices)))
    return abs(interval(moved) - interval(event)), leaked


def find_interval_witness(sc: StructureConstants, eps_p: int = 1,
                          include_time: bool = False) -> Tuple[np.ndarray, Event, float]:
    """Unit boost direction and unit event with the largest first-order interval change.

    The time generator only rescales, so it is skipped unless include_time is set.
    """
    eps_p = check_eps_p(eps_p)
    best = (np.zeros(sc.dim), Event(np.eye(sc.dim)[-1]), 0.0)
    for rho in range(sc.dim):
        if rho == sc.time_index and not include_time:
            continue
        dphi = np.zeros(sc.dim)
        dphi[rho] = 1.0
        eigenvalues, eigenvectors = np.linalg.eigh(_interval_quadratic_form(sc, dphi))
        pick = int(np.argmax(np.abs(eigenvalues)))
        event = Event(eigenvectors[:, pick])
        value = interval_first_order_change(sc, dphi, event, eps_p)
        if abs(value) > abs(best[2]):
            best = (dphi, event, value)
    logger.debug(f"🔎 Interval witness for N={sc.n}: change {best[2]:.3e}")
    return best


def verify_interval_witness(sc: StructureConstants, eps_p: int = 1,
                            threshold: float = WITNESS_THRESHOLD) -> VerificationRecord:
    """Passes when some boost changes the interval at first order by at least threshold."""
    _, _, value = find_interval_witness(sc, eps_p)
    return VerificationRecord.evaluate("geometry.interval_witness", max(0.0, threshold - abs(value)), 0.0)


def covariance_check(g2n: GeneratorSet2N, gn2: GeneratorSetN2, params: TransformParams,
                     tol: float = LIBRARY_TOLERANCE) -> VerificationReport:
    """Momenta conjugated by the 2N-rep group element transform with the N^2-rep matrix."""
    _check_params(gn2, params)
    if g2n.eps_p != gn2.eps_p or g2n.n != gn2.n:
        raise ParameterError("2N-rep and N^2-rep generators must share N and eps_p")
    theta_j = np.einsum('s,sab->ab', params.theta, g2n.j2n)
    phi_k = np.einsum('s,sab->ab', params.phi, g2n.k2n)
    u, u_inv = matrix_exp(-1j * theta_j), matrix_exp(1j * theta_j)
    v, v_inv = matrix_exp(-1j * phi_k), matrix_exp(1j * phi_k)
    p = g2n.momentum

    def conjugate(left, right):
        return np.einsum('ab,mbc,cd->mad', left, p, right)

    def mix(matrix):
        return np.einsum('mr,rab->mab', matrix, p)

    rotation = rotation_matrix(gn2, params.theta)
    boost = boost_matrix(gn2, params.phi)
    report = VerificationReport()
    report.add("covariance.rotation", max_residual(conjugate(u, u_inv), mix(rotation)), tol)
    report.add("covariance.boost", max_residual(conjugate(v, v_inv), mix(boost)), tol)
    report.add("covariance.combined", max_residual(conjugate(u @ v, v_inv @ u_inv), mix(boost @ rotation)), tol)
    return report
