"""
Unit tests for momentum module.
"""

import unittest

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src.algebra import build_2n_generators, build_n2_generators, lorentz_weyl_residuals
from src.basis import BasisChange, anti_rep, build_utility_basis
from src.errors import FactorizationError, ParameterError, RepresentationError
from src.momentum import (basis_change_covariance, build_combined, build_factor, build_similarity,
                          cg_factorization_check, combine_reps, parse_rep_spec, projection_residual,
                          solve_momentum, swap_permutation, tensor_rep, verify_equivalence,
                          verify_fundamental, verify_momentum_solution, verify_similarity)
from src.structure import compute_structure_constants


def _algebra(n):
    basis = build_utility_basis(n)
    return basis, compute_structure_constants(basis)


class TestFactors(unittest.TestCase):
    """Test named factor representations."""

    def test_dimensions(self):
        """Test factor sizes for N=3."""
        basis, _ = _algebra(3)
        sizes = {name: build_factor(name, basis).shape[1]
                 for name in ("trivial", "fund", "antifund", "sym2", "antisym2", "sym2bar", "antisym2bar")}
        self.assertEqual(sizes, {"trivial": 1, "fund": 3, "antifund": 3, "sym2": 6, "antisym2": 3,
                                 "sym2bar": 6, "antisym2bar": 3})

    def test_factors_are_representations(self):
        """Test every factor satisfies [J, J] = i f J."""
        for n in (2, 3):
            basis, sc = _algebra(n)
            for name in ("trivial", "fund", "antifund", "sym2", "antisym2", "sym2bar", "antisym2bar"):
                with self.subTest(n=n, name=name):
                    self.assertTrue(verify_fundamental(build_factor(name, basis), sc).passed)

    def test_unknown_and_empty(self):
        """Test unknown names and the empty antisymmetric square for N=1."""
        basis, _ = _algebra(2)
        with self.assertRaises(RepresentationError):
            build_factor("adjoint", basis)
        with self.assertRaises(RepresentationError):
            build_factor("antisym2", build_utility_basis(1))

    def test_combine_rejects_non_rep(self):
        """Test random matrices are not accepted as a representation."""
        basis, sc = _algebra(2)
        random = np.random.default_rng(1).standard_normal((4, 2, 2)).astype(complex)
        with self.assertRaises(RepresentationError):
            combine_reps(random, basis.matrices, sc)

    def test_combined_lorentz_weyl(self):
        """Test (sym2, antifund) satisfies the Lorentz-Weyl relations."""
        basis, sc = _algebra(3)
        rep = build_combined(("sym2", "antifund"), basis, sc)
        self.assertEqual(rep.dim, 18)
        self.assertLess(max(lorentz_weyl_residuals(rep.j_ab, rep.k_ab, sc.f).values()), 1e-10)


class TestRepSpec(unittest.TestCase):
    """Test parsing of representation specs."""

    def test_default_ab(self):
        """Test the default (A, B) depends on eps_p."""
        self.assertEqual(parse_rep_spec("sym2,antisym2bar", 1), (("fund", "antifund"), ("sym2", "antisym2bar")))
        self.assertEqual(parse_rep_spec("fund,trivial", -1), (("antifund", "fund"), ("fund", "trivial")))

    def test_explicit(self):
        """Test both pairs spelled out."""
        self.assertEqual(parse_rep_spec("trivial,fund:fund,trivial"), (("trivial", "fund"), ("fund", "trivial")))

    def test_malformed(self):
        """Test malformed specs raise."""
        for text in ("fund", "fund,foo", "a,b:c,d:e,f", "fund,fund,fund"):
            with self.subTest(text=text):
                with self.assertRaises(RepresentationError):
                    parse_rep_spec(text)


class TestSimilarity(unittest.TestCase):
    """Test the similarity map to (N, Nbar)."""

    def test_identities(self):
        """Test both intertwining identities for N=1..4."""
        for n in range(1, 5):
            basis, sc = _algebra(n)
            sim = build_similarity(basis, sc)
            np.testing.assert_allclose(sim.s_inverse, 2 * sim.s.conj().T, atol=1e-12)
            for eps_p in (1, -1):
                with self.subTest(n=n, eps_p=eps_p):
                    self.assertTrue(verify_similarity(sim, basis, build_n2_generators(sc, eps_p)).passed)
                    self.assertTrue(verify_equivalence(basis, sc, eps_p).passed)

    def test_swap_permutation(self):
        """Test the swap permutation is an involution."""
        perm = swap_permutation(3)
        np.testing.assert_array_equal(perm @ perm, np.eye(9))
        self.assertEqual(perm[1, 3], 1.0)

    def test_needs_utility(self):
        """Test the anti-rep basis is refused."""
        basis, sc = _algebra(2)
        with self.assertRaises(RepresentationError):
            build_similarity(anti_rep(basis), sc)

    def test_basis_change_covariance(self):
        """Test generators and similarity map follow ten random invertible basis changes per N."""
        rng = np.random.default_rng(17)
        for n in (1, 2, 3):
            basis, _ = _algebra(n)
            for trial in range(10):
                change = BasisChange.random(n * n, rng)
                for eps_p in (1, -1):
                    with self.subTest(n=n, trial=trial, eps_p=eps_p):
                        report = basis_change_covariance(basis, change, eps_p, tol=1e-10)
                        self.assertTrue(report.passed, report.failures())

    def test_orthogonal_basis_change(self):
        """Test orthogonal basis changes are orthogonal and covariant."""
        rng = np.random.default_rng(5)
        basis, _ = _algebra(3)
        change = BasisChange.random(9, rng, orthogonal=True)
        np.testing.assert_allclose(change.r @ change.r.T, np.eye(9), atol=1e-12)
        for eps_p in (1, -1):
            self.assertTrue(basis_change_covariance(basis, change, eps_p).passed)


class TestMomentumSolver(unittest.TestCase):
    """Test the momentum solver."""

    def test_reproduces_2n_momenta(self):
        """Test (trivial, fund) + (fund, trivial) recovers P+ and P-."""
        for eps_p, side in ((1, "upper"), (-1, "lower")):
            with self.subTest(eps_p=eps_p):
                basis, sc = _algebra(2)
                rep_ab = build_combined(("trivial", "fund"), basis, sc)
                rep_cd = build_combined(("fund", "trivial"), basis, sc)
                solution = solve_momentum(rep_ab, rep_cd, sc, eps_p, side)
                self.assertEqual(solution.basis_dim, 1)
                self.assertTrue(verify_momentum_solution(solution, rep_ab, rep_cd, sc).passed)
                g2n = build_2n_generators(basis, eps_p)
                self.assertLess(projection_residual(solution, g2n.momentum), 1e-10)
                self.assertAlmostEqual(np.linalg.norm(solution.p_matrices), 1.0)

    def test_reproduces_momenta_for_n1(self):
        """Test the N=1 constraint system, zero up to roundoff, keeps its one solution."""
        basis, sc = _algebra(1)
        rep_ab = build_combined(("trivial", "fund"), basis, sc)
        rep_cd = build_combined(("fund", "trivial"), basis, sc)
        for eps_p, side in ((1, "upper"), (-1, "lower")):
            with self.subTest(eps_p=eps_p):
                solution = solve_momentum(rep_ab, rep_cd, sc, eps_p, side)
                self.assertEqual(solution.basis_dim, 1)
                self.assertTrue(verify_momentum_solution(solution, rep_ab, rep_cd, sc).passed)
                self.assertLess(projection_residual(solution, build_2n_generators(basis, eps_p).momentum), 1e-10)

    def test_incompatible_pair(self):
        """Test (N, Nbar) + (N, Nbar) has no momentum matrices."""
        basis, sc = _algebra(2)
        rep = build_combined(("fund", "antifund"), basis, sc)
        solution = solve_momentum(rep, rep, sc, 1, "upper")
        self.assertEqual(solution.basis_dim, 0)
        self.assertEqual(solution.p_matrices.shape[0], 0)

    def test_tensor_products(self):
        """Test (N, Nbar) + (N x N, Nbar x Nbar) has four independent solutions for N=2."""
        basis, sc = _algebra(2)
        h, h_bar = basis.matrices, anti_rep(basis).matrices
        rep_ab = combine_reps(h, h_bar, sc)
        rep_cd = combine_reps(tensor_rep(h, h), tensor_rep(h_bar, h_bar), sc)
        solution = solve_momentum(rep_ab, rep_cd, sc, 1, "upper")
        self.assertEqual(solution.basis_dim, 4)
        self.assertTrue(verify_momentum_solution(solution, rep_ab, rep_cd, sc).passed)
        with self.assertRaises(FactorizationError):
            cg_factorization_check(solution, build_similarity(basis, sc))

    def test_irreducible_factorization(self):
        """Test (sym2, antisym2bar) gives one solution that factorizes."""
        basis, sc = _algebra(2)
        pair_ab, pair_cd = parse_rep_spec("sym2,antisym2bar", 1)
        rep_ab = build_combined(pair_ab, basis, sc)
        rep_cd = build_combined(pair_cd, basis, sc)
        solution = solve_momentum(rep_ab, rep_cd, sc, 1, "upper")
        self.assertEqual(solution.basis_dim, 1)
        self.assertTrue(verify_momentum_solution(solution, rep_ab, rep_cd, sc).passed)
        self.assertTrue(cg_factorization_check(solution, build_similarity(basis, sc)).passed)

    def test_golden_factorization(self):
        """Test the 2N momenta factorize for both families."""
        for eps_p, side in ((1, "upper"), (-1, "lower")):
            basis, sc = _algebra(3)
            rep_ab = build_combined(("trivial", "fund"), basis, sc)
            rep_cd = build_combined(("fund", "trivial"), basis, sc)
            solution = solve_momentum(rep_ab, rep_cd, sc, eps_p, side)
            self.assertTrue(cg_factorization_check(solution, build_similarity(basis, sc)).passed)

    def test_invalid_side(self):
        """Test an unknown block side raises."""
        basis, sc = _algebra(2)
        rep = build_combined(("fund", "antifund"), basis, sc)
        with self.assertRaises(ParameterError):
            solve_momentum(rep, rep, sc, 1, "diagonal")


if __name__ == '__main__':
    unittest.main()
