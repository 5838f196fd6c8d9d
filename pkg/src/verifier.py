"""
Verification suite: runs every identity family for one (N, eps_p) on a
thread pool and collects the records into one sorted report.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, Iterable, List

import numpy as np
from tqdm import tqdm

from .algebra import (build_2n_generators, build_n2_generators, verify_copycat, verify_copycat_identity,
                      verify_generator_pattern, verify_lorentz_weyl, verify_poincare_weyl)
from .basis import (BasisChange, build_utility_basis, spacetime_subspace_indices, verify_hermiticity,
                    verify_orthonormality, verify_traces)
from .config import (BASIS_CHANGE_SUITE_MAX_N, BASIS_CHANGE_TRIALS, DEFAULT_SEED, DEFAULT_TRIALS,
                     LIBRARY_TOLERANCE, MOMENTUM_SUITE_MAX_N)
from .errors import NPWError
from .geometry import (Event, TransformParams, boost_interval_residual, covariance_check, rotation_invariance_check,
                       boost_matrix, subspace_invariance_check, time_boost_scale,
                       verify_interval_witness)
from .linalg import max_residual
from .momentum import (basis_change_covariance, build_combined, cg_factorization_check, parse_rep_spec,
                       projection_residual,
                       similarity_from_basis, solve_momentum, verify_equivalence, verify_momentum_solution,
                       verify_similarity)
from .report import VerificationRecord, VerificationReport
from .structure import (compute_structure_constants, perturb, solve_structure_constants, verify_anti_rep,
                        verify_closure, verify_symmetries, verify_time_index)

logger = logging.getLogger(__name__)

# Stable order; a family's position seeds its random stream
FAMILIES = ("basis", "structure", "poincare_weyl", "lorentz_weyl", "copycat", "generator_pattern",
            "rotation", "boost", "subspace", "witness", "covariance", "similarity", "basis_change", "momentum")


def merge_worst(records: Iterable[VerificationRecord]) -> List[VerificationRecord]:
    """Keep the largest residual per identity across repeated trials."""
    worst: Dict[str, VerificationRecord] = {}
    for record in records:
        current = worst.get(record.identity)
        if current is None or not record.residual <= current.residual:
            worst[record.identity] = record
    return list(worst.values())


def _random_direction(rng: np.random.Generator, dim: int, max_norm: float) -> np.ndarray:
    """Random vector with norm uniform in [0, max_norm]."""
    vector = rng.standard_normal(dim)
    return vector * (rng.uniform(0.0, max_norm) / np.linalg.norm(vector))


class VerificationSuite:
    """Builds the algebra for one (N, eps_p) and checks every identity family."""

    def __init__(self, n: int, eps_p: int = 1, tolerance: float = LIBRARY_TOLERANCE,
                 seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS, inject_fault: bool = False):
        """Build basis, structure constants and both generator sets."""
        self.n = n
        self.eps_p = eps_p
        self.tolerance = tolerance
        self.seed = seed
        self.trials = trials
        self.basis = build_utility_basis(n)
        self.sc = compute_structure_constants(self.basis)
        if inject_fault:
            self.sc = perturb(self.sc)
        self.g2n = build_2n_generators(self.basis, eps_p)
        self.gn2 = build_n2_generators(self.sc, eps_p)
        self.shutdown_requested = False

    def set_shutdown_flag(self, flag):
        """Set shutdown flag for graceful termination."""
        self.shutdown_requested = flag

    def rng_for(self, family: str) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64([self.seed, FAMILIES.index(family)]))

    def family_names(self) -> List[str]:
        """Families that apply to this N."""
        skipped = set()
        if self.n < 2:
            skipped.add("subspace")
        if self.n < 3:
            skipped.add("witness")
        if self.n > BASIS_CHANGE_SUITE_MAX_N:
            skipped.add("basis_change")
        if self.n > MOMENTUM_SUITE_MAX_N:
            skipped.add("momentum")
        return [family for family in FAMILIES if family not in skipped]

    # ------------------------------------------------------------------
    # Families
    # ------------------------------------------------------------------

    def check_basis(self) -> List[VerificationRecord]:
        return [verify_orthonormality(self.basis, self.tolerance), verify_traces(self.basis, self.tolerance),
                verify_hermiticity(self.basis, self.tolerance)]

    def check_structure(self) -> List[VerificationRecord]:
        report = verify_closure(self.basis, self.sc, self.tolerance)
        report.extend(verify_anti_rep(self.basis, self.sc, self.tolerance).records)
        report.records.append(verify_symmetries(self.sc, self.tolerance))
        report.records.append(verify_time_index(self.sc, self.tolerance))
        solved = solve_structure_constants(self.basis)
        report.add("structure.solved_matches_traced",
                   max(max_residual(solved.f, self.sc.f), max_residual(solved.d, self.sc.d)), self.tolerance)
        return report.records

    def check_poincare_weyl(self) -> List[VerificationRecord]:
        return verify_poincare_weyl(self.g2n, self.sc, self.tolerance).records

    def check_lorentz_weyl(self) -> List[VerificationRecord]:
        return verify_lorentz_weyl(self.gn2, self.sc, self.tolerance).records

    def check_copycat(self) -> List[VerificationRecord]:
        records = [verify_copycat(self.g2n, self.gn2, self.tolerance)]
        return records + verify_copycat_identity(self.g2n, self.sc, self.tolerance).records

    def check_generator_pattern(self) -> List[VerificationRecord]:
        return [verify_generator_pattern(self.gn2, self.tolerance)]

    def check_rotation(self) -> List[VerificationRecord]:
        rng = self.rng_for("rotation")
        worst_distance, worst_time = 0.0, 0.0
        for _ in range(self.trials):
            theta = _random_direction(rng, self.gn2.dim, np.pi)
            event = Event(rng.standard_normal(self.gn2.dim))
            distance, time = rotation_invariance_check(self.gn2, theta, event)
            worst_distance, worst_time = max(worst_distance, distance), max(worst_time, time)
        return [VerificationRecord.evaluate("geometry.rotation.distance", worst_distance, self.tolerance),
                VerificationRecord.evaluate("geometry.rotation.time", worst_time, self.tolerance)]

    def check_boost(self) -> List[VerificationRecord]:
        """Spatial boosts keep the interval for N=2; the time boost rescales for every N."""
        rng = self.rng_for("boost")
        worst_interval, worst_scale = 0.0, 0.0
        t = self.gn2.dim - 1
        for _ in range(self.trials):
            phi_t = rng.uniform(-1.0, 1.0)
            time_phi = np.zeros(self.gn2.dim)
            time_phi[t] = phi_t
            expected = time_boost_scale(self.n, phi_t, self.eps_p) * np.eye(self.gn2.dim)
            worst_scale = max(worst_scale, max_residual(boost_matrix(self.gn2, time_phi), expected))

            if self.n == 2:
                phi = np.zeros(self.gn2.dim)
                phi[:t] = _random_direction(rng, t, 1.0)
                event = Event(rng.standard_normal(self.gn2.dim))
                worst_interval = max(worst_interval, boost_interval_residual(self.gn2, phi, event))
        records = [VerificationRecord.evaluate("geometry.time_boost_scale", worst_scale, self.tolerance)]
        if self.n == 2:
            records.append(VerificationRecord.evaluate("geometry.boost_interval", worst_interval, self.tolerance))
        return records

    def check_subspace(self) -> List[VerificationRecord]:
        rng = self.rng_for("subspace")
        indices = list(spacetime_subspace_indices(self.n))
        worst = 0.0
        for _ in range(self.trials):
            x = np.zeros(self.sc.dim)
            x[indices] = rng.standard_normal(4)
            dphi = rng.standard_normal(3)
            worst = max(worst, abs(subspace_invariance_check(self.sc, Event(x), dphi, self.eps_p)))
        return [VerificationRecord.evaluate("geometry.subspace_first_order", worst, self.tolerance)]

    def check_witness(self) -> List[VerificationRecord]:
        return [verify_interval_witness(self.sc, self.eps_p)]

    def check_covariance(self) -> List[VerificationRecord]:
        rng = self.rng_for("covariance")
        records = []
        for _ in range(self.trials):
            params = TransformParams(theta=_random_direction(rng, self.gn2.dim, 1.0),
                                     phi=_random_direction(rng, self.gn2.dim, 1.0), eps_p=self.eps_p)
            records.extend(covariance_check(self.g2n, self.gn2, params, self.tolerance).records)
        return merge_worst(records)

    def check_similarity(self) -> List[VerificationRecord]:
        sim = similarity_from_basis(self.basis)
        report = verify_similarity(sim, self.basis, self.gn2, self.tolerance)
        report.extend(verify_equivalence(self.basis, self.sc, self.eps_p, self.tolerance).records)
        return report.records

    def check_basis_change(self) -> List[VerificationRecord]:
        rng = self.rng_for("basis_change")
        records = []
        for trial in range(BASIS_CHANGE_TRIALS):
            change = BasisChange.random(self.basis.dim, rng, orthogonal=(trial % 2 == 0))
            records.extend(basis_change_covariance(self.basis, change, self.eps_p, self.tolerance).records)
        return merge_worst(records)

    def check_momentum(self) -> List[VerificationRecord]:
        """(trivial, fund) + (fund, trivial) reproduces the 2N momenta; for N=2 and eps_p=+1 the
        irreducible pairing (fund, antifund) + (sym2, antisym2bar) also factorizes."""
        side = "upper" if self.eps_p == 1 else "lower"
        sim = similarity_from_basis(self.basis)
        rep_ab = build_combined(("trivial", "fund"), self.basis, self.sc, self.tolerance)
        rep_cd = build_combined(("fund", "trivial"), self.basis, self.sc, self.tolerance)
        solution = solve_momentum(rep_ab, rep_cd, self.sc, self.eps_p, side, self.tolerance)
        records = verify_momentum_solution(solution, rep_ab, rep_cd, self.sc, self.tolerance).records
        records.append(VerificationRecord.evaluate(
            "momentum.reproduces_2n", projection_residual(solution, self.g2n.momentum), self.tolerance))
        records.extend(self._factorization_records(solution, sim, "momentum", "cg"))

        if self.n == 2 and self.eps_p == 1:
            pair_ab, pair_cd = parse_rep_spec("sym2,antisym2bar", self.eps_p)
            rep_ab = build_combined(pair_ab, self.basis, self.sc, self.tolerance)
            rep_cd = build_combined(pair_cd, self.basis, self.sc, self.tolerance)
            solution = solve_momentum(rep_ab, rep_cd, self.sc, self.eps_p, "upper", self.tolerance)
            records.extend(verify_momentum_solution(solution, rep_ab, rep_cd, self.sc, self.tolerance,
                                                    prefix="momentum.irreducible").records)
            records.extend(self._factorization_records(solution, sim, "momentum.irreducible", "cg.irreducible"))
        return records

    @staticmethod
    def _factorization_records(solution, sim, prefix: str, cg_prefix: str) -> List[VerificationRecord]:
        if solution.basis_dim != 1:
            return [VerificationRecord.evaluate(f"{prefix}.solution_dim", abs(solution.basis_dim - 1), 0.0)]
        return cg_factorization_check(solution, sim, prefix=cg_prefix).records

    # ------------------------------------------------------------------
    # Execution
    # ------------------------------------------------------------------

    def run_family(self, family: str) -> List[VerificationRecord]:
        """Run one family; a construction error becomes a failing record."""
        if self.shutdown_requested:
            return []
        check: Callable[[], List[VerificationRecord]] = getattr(self, f"check_{family}")
        try:
            records = check()
        except NPWError as e:
            logger.error(f"❌ {family} checks raised {type(e).__name__}: {e}")
            return [VerificationRecord.evaluate(f"{family}.error", math.inf, self.tolerance)]
        failed = sum(1 for record in records if not record.passed)
        status = "✅" if failed == 0 else f"❌ ({failed} failed)"
        logger.info(f"Checked {family}: {len(records)} identities {status}")
        return records

    def run(self, max_workers: int = 4, show_progress: bool = True) -> VerificationReport:
        """Run every applicable family with threading; records come back sorted by identity."""
        families = self.family_names()
        records: List[VerificationRecord] = []
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(self.run_family, family): family for family in families}
            with tqdm(total=len(futures), desc="Verifying", unit="family", disable=not show_progress) as pbar:
                for future in as_completed(futures):
                    if self.shutdown_requested:
                        logger.info("⏹️  Cancelling remaining checks...")
                        for pending in futures:
                            pending.cancel()
                        break
                    try:
                        records.extend(future.result())
                    except Exception as e:
                        logger.error(f"Error in future for {futures[future]}: {str(e)}")
                        records.append(VerificationRecord.evaluate(f"{futures[future]}.error", math.inf,
                                                                   self.tolerance))
                    finally:
                        pbar.update(1)
        return VerificationReport(records=records).sorted()
