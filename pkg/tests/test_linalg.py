"""
Unit tests for linalg module.
"""

import unittest

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np

from src import linalg
from src.errors import ConvergenceError, DimensionError, ImaginaryResidueError, NonFiniteError, ToleranceError

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class TestHermitianHelpers(unittest.TestCase):
    """Test conjugation and hermitian splitting."""

    def test_hermitian_split(self):
        """Test split of a real non-symmetric matrix."""
        herm, anti = linalg.hermitian_split([[1, 2], [3, 4]])
        np.testing.assert_allclose(herm, [[1, 2.5], [2.5, 4]])
        np.testing.assert_allclose(anti, [[0, -0.5], [0.5, 0]])
        np.testing.assert_allclose(herm + anti, [[1, 2], [3, 4]])

    def test_hermitian_split_requires_square(self):
        """Test non-square input is rejected."""
        with self.assertRaises(DimensionError):
            linalg.hermitian_split(np.ones((2, 3)))

    def test_hermitian_conjugate(self):
        """Test conjugate transpose."""
        m = np.array([[1, 2j], [3, 4 + 1j]])
        np.testing.assert_allclose(linalg.hermitian_conjugate(m), [[1, 3], [-2j, 4 - 1j]])

    def test_non_finite_rejected(self):
        """Test NaN entries raise."""
        with self.assertRaises(NonFiniteError):
            linalg.as_matrix([[np.nan, 0], [0, 1]])

    def test_is_hermitian_and_unitary(self):
        """Test predicates on Pauli matrices."""
        self.assertTrue(linalg.is_hermitian(SIGMA_Y))
        self.assertTrue(linalg.is_unitary(SIGMA_Y))
        self.assertFalse(linalg.is_hermitian(1j * SIGMA_X))
        self.assertFalse(linalg.is_unitary(2 * SIGMA_X))


class TestMatrixExp(unittest.TestCase):
    """Test matrix exponential."""

    def test_zero(self):
        """Test exp(0) is the identity."""
        np.testing.assert_allclose(linalg.matrix_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        """Test exp of a diagonal matrix."""
        np.testing.assert_allclose(linalg.matrix_exp(np.diag([1.0, 2.0])), np.diag([np.e, np.e ** 2]), rtol=1e-13)

    def test_rotation(self):
        """Test exp(-i t sigma_y) is a real rotation."""
        t = 0.7
        expected = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
        np.testing.assert_allclose(linalg.matrix_exp(-1j * t * SIGMA_Y), expected, atol=1e-14)

    def test_overflow(self):
        """Test overflow raises ConvergenceError."""
        with self.assertRaises(ConvergenceError):
            linalg.matrix_exp(np.diag([1e6, 0.0]))


class TestNullspace(unittest.TestCase):
    """Test nullspace and rank."""

    def test_rank_one_row(self):
        """Test nullspace of a single row."""
        vectors = linalg.nullspace([[1.0, 1.0]])
        self.assertEqual(len(vectors), 1)
        v = vectors[0]
        self.assertAlmostEqual(np.linalg.norm(v), 1.0)
        self.assertLess(abs(v[0] + v[1]), 1e-12)

    def test_zero_matrix_full_nullspace(self):
        """Test an all-zero matrix has the whole space as nullspace."""
        self.assertEqual(len(linalg.nullspace(np.zeros((2, 3)))), 3)

    def test_identity_trivial_nullspace(self):
        """Test the identity has an empty nullspace."""
        self.assertEqual(linalg.nullspace(np.eye(4)), [])

    def test_non_positive_tolerance(self):
        """Test tol <= 0 raises."""
        with self.assertRaises(ToleranceError):
            linalg.nullspace(np.eye(2), tol=0.0)

    def test_numerical_rank(self):
        """Test rank and singular values of an outer product."""
        u = np.array([1.0, 2.0, 3.0])
        rank, singular_values = linalg.numerical_rank(np.outer(u, u))
        self.assertEqual(rank, 1)
        self.assertAlmostEqual(singular_values[0], 14.0)
        self.assertEqual(linalg.numerical_rank(np.zeros((2, 2)))[0], 0)

    def test_roundoff_matrix_is_rank_zero(self):
        """Test a matrix that is zero up to roundoff has a full nullspace."""
        self.assertEqual(len(linalg.nullspace([[-2.2e-16j]])), 1)
        self.assertEqual(linalg.nullspace_matrix([[0.0, -2.2e-16j]]).shape, (2, 2))
        self.assertEqual(linalg.numerical_rank([[1e-15, 0.0], [0.0, 3e-16]])[0], 0)

    def test_small_but_real_constraint_kept(self):
        """Test entries well above tol still count toward the rank."""
        self.assertEqual(len(linalg.nullspace([[1e-6, 0.0]], tol=1e-10)), 1)


class TestCommutators(unittest.TestCase):
    """Test commutator helpers."""

    def test_pauli_commutator(self):
        """Test [sx, sy] = 2i sz and {sx, sx} = 2."""
        np.testing.assert_allclose(linalg.commutator(SIGMA_X, SIGMA_Y), 2j * SIGMA_Z)
        np.testing.assert_allclose(linalg.anticommutator(SIGMA_X, SIGMA_X), 2 * np.eye(2))

    def test_pair_commutators(self):
        """Test the stacked commutator table."""
        stack = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
        table = linalg.pair_commutators(stack, stack)
        self.assertEqual(table.shape, (3, 3, 2, 2))
        np.testing.assert_allclose(table[1, 2], 2j * SIGMA_X)
        np.testing.assert_allclose(table[2, 1], -2j * SIGMA_X)
        np.testing.assert_allclose(linalg.pair_anticommutators(stack, stack)[0, 1], np.zeros((2, 2)))

    def test_kron_stack(self):
        """Test stacked Kronecker products agree with np.kron."""
        rng = np.random.default_rng(3)
        a = rng.standard_normal((2, 2, 3))
        b = rng.standard_normal((2, 4, 2))
        out = linalg.kron_stack(a, b)
        for i in range(2):
            np.testing.assert_allclose(out[i], np.kron(a[i], b[i]))


class TestRealPart(unittest.TestCase):
    """Test real extraction."""

    def test_real_part(self):
        """Test tiny imaginary parts are dropped."""
        np.testing.assert_allclose(linalg.real_part(np.array([1 + 1e-15j, 2])), [1, 2])

    def test_real_part_rejects(self):
        """Test large imaginary parts raise."""
        with self.assertRaises(ImaginaryResidueError):
            linalg.real_part(np.array([1 + 1e-6j]))

    def test_max_residual(self):
        """Test max entrywise residual."""
        self.assertEqual(linalg.max_residual([1.0, -3.0]), 3.0)
        self.assertEqual(linalg.max_residual([1.0, 2.0], [1.0, 2.5]), 0.5)
        self.assertEqual(linalg.max_residual(np.zeros((0,))), 0.0)


if __name__ == '__main__':
    unittest.main()
