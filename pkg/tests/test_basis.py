"""
Unit tests for basis module.
"""

import unittest

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

import numpy as np
from hypothesis import given, settings, strategies as st

from src.basis import (BasisChange, BasisLabel, anti_rep, apply_basis_change, build_utility_basis,
                       expand_complex_in_basis, expand_in_basis, random_hermitian, spacetime_subspace_indices,
                       utility_labels, verify_orthonormality, verify_traces)
from src.errors import DimensionError, ImaginaryResidueError, SingularMatrixError


class TestUtilityBasis(unittest.TestCase):
    """Test construction of the utility basis."""

    def test_n1(self):
        """Test N=1 holds the single time matrix 1/sqrt(2)."""
        basis = build_utility_basis(1)
        self.assertEqual(basis.dim, 1)
        self.assertEqual(basis.labels[0], BasisLabel("time", 1, 1))
        np.testing.assert_allclose(basis.matrices[0], [[1 / np.sqrt(2)]])

    def test_n2_is_half_pauli(self):
        """Test N=2 gives sigma_x/2, sigma_y/2, sigma_z/2 and I/2."""
        basis = build_utility_basis(2)
        expected = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]], [[1, 0], [0, 1]]]) / 2
        np.testing.assert_allclose(basis.matrices, expected)

    def test_n3_flat_indices(self):
        """Test one-based flat indices of the 3+1 labels for N=3."""
        basis = build_utility_basis(3)
        self.assertEqual(basis.flat_index_of(BasisLabel("plus", 1, 2)), 1)
        self.assertEqual(basis.flat_index_of(BasisLabel("minus", 1, 2)), 4)
        self.assertEqual(basis.flat_index_of(BasisLabel("diag", 2, 2)), 7)
        self.assertEqual(basis.flat_index_of(BasisLabel("time", 1, 1)), 9)

    def test_label_order(self):
        """Test family order and lexicographic pairs."""
        names = [label.name for label in utility_labels(3)]
        self.assertEqual(names, ["+,12", "+,13", "+,23", "-,12", "-,13", "-,23", "0,22", "0,33", "0,11"])

    def test_orthonormal_and_traces(self):
        """Test 2 tr(h h) = delta and the trace pattern for N up to 6."""
        for n in range(1, 7):
            with self.subTest(n=n):
                basis = build_utility_basis(n)
                self.assertTrue(verify_orthonormality(basis).passed)
                self.assertTrue(verify_traces(basis).passed)
                self.assertTrue(basis.is_orthonormal)

    def test_invalid_n(self):
        """Test N < 1 raises."""
        with self.assertRaises(DimensionError):
            build_utility_basis(0)

    def test_invalid_labels(self):
        """Test malformed labels raise."""
        with self.assertRaises(DimensionError):
            BasisLabel("plus", 2, 1)
        with self.assertRaises(DimensionError):
            BasisLabel("diag", 1, 1)
        with self.assertRaises(DimensionError):
            BasisLabel("time", 2, 2)

    def test_matrices_are_read_only(self):
        """Test stored matrices cannot be modified."""
        basis = build_utility_basis(2)
        with self.assertRaises(ValueError):
            basis.matrices[0, 0, 0] = 5


class TestAntiRep(unittest.TestCase):
    """Test the anti-representation."""

    def test_n2_values(self):
        """Test the y matrix is unchanged and the x matrix flips sign."""
        basis = build_utility_basis(2)
        anti = anti_rep(basis)
        np.testing.assert_allclose(anti.matrices[1], basis.matrices[1])
        np.testing.assert_allclose(anti.matrices[0], -basis.matrices[0])
        self.assertEqual(anti.kind, "anti")

    def test_involution(self):
        """Test applying the anti-representation twice returns the original."""
        basis = build_utility_basis(3)
        twice = anti_rep(anti_rep(basis))
        np.testing.assert_array_equal(twice.matrices, basis.matrices)
        self.assertEqual(twice.kind, "utility")


class TestExpansion(unittest.TestCase):
    """Test expansion of matrices in the basis."""

    def test_non_hermitian_rejected(self):
        """Test a non-hermitian matrix has no real expansion."""
        basis = build_utility_basis(2)
        with self.assertRaises(ImaginaryResidueError):
            expand_in_basis(np.array([[0, 1], [0, 0]]), basis)

    def test_complex_expansion(self):
        """Test any matrix has a complex expansion."""
        basis = build_utility_basis(2)
        a = np.array([[0, 1], [0, 0]], dtype=complex)
        np.testing.assert_allclose(basis.combine(expand_complex_in_basis(a, basis)), a, atol=1e-14)

    def test_wrong_size(self):
        """Test a matrix of the wrong size raises."""
        with self.assertRaises(DimensionError):
            expand_in_basis(np.eye(3), build_utility_basis(2))

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(min_value=1, max_value=5), seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_hermitian_reconstruction(self, n, seed):
        """Test real coefficients reconstruct a random hermitian matrix."""
        basis = build_utility_basis(n)
        a = random_hermitian(n, np.random.default_rng(seed))
        coefficients = expand_in_basis(a, basis)
        self.assertEqual(coefficients.dtype, np.float64)
        np.testing.assert_allclose(basis.combine(coefficients), a, atol=1e-12)

    def test_subspace_indices(self):
        """Test zero-based 3+1 indices for N=3 and the N=1 error."""
        self.assertEqual(spacetime_subspace_indices(3), (0, 3, 6, 8))
        self.assertEqual(spacetime_subspace_indices(2), (0, 1, 2, 3))
        with self.assertRaises(DimensionError):
            spacetime_subspace_indices(1)


class TestBasisChange(unittest.TestCase):
    """Test real changes of basis."""

    def test_singular(self):
        """Test a singular matrix raises."""
        with self.assertRaises(SingularMatrixError):
            BasisChange.from_matrix(np.ones((4, 4)))

    def test_complex_rejected(self):
        """Test complex entries raise."""
        with self.assertRaises(ImaginaryResidueError):
            BasisChange.from_matrix(np.eye(4) * 1j)

    def test_random_inverse(self):
        """Test r r^-1 = 1 for random changes."""
        rng = np.random.default_rng(11)
        for orthogonal in (True, False):
            change = BasisChange.random(9, rng, orthogonal=orthogonal)
            np.testing.assert_allclose(change.r @ change.r_inverse, np.eye(9), atol=1e-12)

    def test_permutation(self):
        """Test a permutation swaps basis matrices and marks the basis primed."""
        basis = build_utility_basis(2)
        primed = apply_basis_change(basis, BasisChange.permutation(4, 0, 2))
        np.testing.assert_allclose(primed.matrices[0], basis.matrices[2])
        np.testing.assert_allclose(primed.matrices[2], basis.matrices[0])
        self.assertEqual(primed.kind, "primed")
        self.assertTrue(primed.is_orthonormal)

    def test_scaled_basis_not_orthonormal(self):
        """Test a scaled basis fails orthonormality."""
        primed = apply_basis_change(build_utility_basis(2), BasisChange.from_matrix(2 * np.eye(4)))
        self.assertFalse(primed.is_orthonormal)
        self.assertFalse(verify_orthonormality(primed).passed)

    def test_size_mismatch(self):
        """Test a basis change of the wrong size raises."""
        with self.assertRaises(DimensionError):
            apply_basis_change(build_utility_basis(2), BasisChange.identity(9))


if __name__ == '__main__':
    unittest.main()
