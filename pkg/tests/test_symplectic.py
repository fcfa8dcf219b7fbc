"""
Tests for phase points, symplectic matrices, Hamiltonian flows and the
singular-matrix split.
"""

import unittest

import numpy as np

from src.calculus.errors import DimensionMismatchError, NotSymplecticError, SingularCayleyError
from src.calculus.symplectic import (
    LinearHamiltonian,
    PhasePoint,
    QuadraticHamiltonian,
    SymplecticMatrix,
    cayley_chirp,
    flow_matrix,
    is_symplectic,
    rotation,
    split_for_singular,
    standard_j,
    symplectic_defect,
    symplectic_form,
    symplectic_inverse,
)

SHEAR = np.array([[1.0, 1.0], [0.0, 1.0]])


class TestPhasePoint(unittest.TestCase):
    def test_arithmetic(self):
        a, b = PhasePoint(1.0, 2.0), PhasePoint(-0.5, 0.25)
        np.testing.assert_allclose((a + b).vector, [0.5, 2.25])
        np.testing.assert_allclose((a - b).vector, [1.5, 1.75])
        np.testing.assert_allclose((-a).vector, [-1.0, -2.0])
        np.testing.assert_allclose((2 * a).vector, [2.0, 4.0])

    def test_from_vector_splits_halves(self):
        z = PhasePoint.from_vector([1.0, 2.0, 3.0, 4.0])
        self.assertEqual(z.n, 2)
        np.testing.assert_allclose(z.x, [1.0, 2.0])
        np.testing.assert_allclose(z.p, [3.0, 4.0])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            PhasePoint([1.0, 2.0], [3.0])
        with self.assertRaises(DimensionMismatchError):
            PhasePoint.from_vector([1.0, 2.0, 3.0])
        with self.assertRaises(DimensionMismatchError):
            PhasePoint(1.0, 1.0) + PhasePoint.origin(2)


class TestSymplecticForm(unittest.TestCase):
    def test_standard_j(self):
        J = standard_j(2)
        np.testing.assert_array_equal(J @ J, -np.eye(4))
        np.testing.assert_array_equal(J.T, -J)

    def test_value_and_antisymmetry(self):
        # sigma(z, z') = x' p - p' x
        self.assertEqual(symplectic_form(PhasePoint(1.0, 0.0), PhasePoint(0.0, 1.0)), -1.0)
        rng = np.random.default_rng(7)
        for _ in range(10):
            z, w = rng.standard_normal(2), rng.standard_normal(2)
            self.assertAlmostEqual(symplectic_form(z, w), -symplectic_form(w, z))
            self.assertEqual(symplectic_form(z, z), 0.0)
            self.assertEqual(symplectic_form(z, w), -symplectic_form(w, z))
        z4 = rng.standard_normal(4)
        self.assertEqual(symplectic_form(z4, z4), 0.0)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            symplectic_form(PhasePoint(1.0, 0.0), PhasePoint.origin(2))


class TestSymplecticMatrix(unittest.TestCase):
    def test_predicate(self):
        self.assertTrue(is_symplectic(rotation(0.7).entries))
        self.assertTrue(is_symplectic(SHEAR))
        self.assertFalse(is_symplectic(np.diag([2.0, 1.0])))
        with self.assertRaises(DimensionMismatchError):
            is_symplectic(np.eye(3))

    def test_construction_checks(self):
        with self.assertRaises(NotSymplecticError):
            SymplecticMatrix(np.diag([2.0, 1.0]))
        SymplecticMatrix(np.diag([2.0, 0.5]))

    def test_construction_tolerance_is_relative(self):
        nearly = rotation(0.7).entries + np.array([[2e-10, 0.0], [0.0, 0.0]])
        with self.assertRaises(NotSymplecticError):
            SymplecticMatrix(nearly)
        large = np.diag([100.0, 0.01 + 1e-10])
        self.assertFalse(is_symplectic(large))
        SymplecticMatrix(large)

    def test_inverse(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            H = QuadraticHamiltonian.from_coefficients(*rng.standard_normal(3))
            S = flow_matrix(H, rng.uniform(-1, 1))
            np.testing.assert_allclose((S @ symplectic_inverse(S)).entries, np.eye(2), atol=1e-12)

    def test_apply(self):
        z = rotation(np.pi / 2).apply(PhasePoint(1.0, 0.0))
        np.testing.assert_allclose(z.vector, [0.0, -1.0], atol=1e-15)


class TestFlows(unittest.TestCase):
    def test_harmonic_flow_is_rotation(self):
        for t in (0.3, 1.0, np.pi / 2, -2.0):
            np.testing.assert_allclose(flow_matrix(QuadraticHamiltonian.harmonic(), t).entries,
                                       rotation(t).entries, atol=1e-13)

    def test_free_flow_is_shear(self):
        np.testing.assert_allclose(flow_matrix(QuadraticHamiltonian.free_particle(), 1.0).entries,
                                   SHEAR, atol=1e-14)

    def test_zero_time_is_identity(self):
        H = QuadraticHamiltonian.from_coefficients(1.0, 0.3, 2.0)
        np.testing.assert_array_equal(flow_matrix(H, 0.0).entries, np.eye(2))

    def test_group_law_and_symplecticity(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            H = QuadraticHamiltonian.from_coefficients(*rng.standard_normal(3))
            t, s = rng.uniform(-2, 2, size=2)
            St = flow_matrix(H, t)
            scale = max(1.0, np.max(np.abs(St.entries)) ** 2)
            self.assertLessEqual(symplectic_defect(St), 1e-9 * scale)
            np.testing.assert_allclose(flow_matrix(H, t + s).entries, (St @ flow_matrix(H, s)).entries,
                                       rtol=1e-9, atol=1e-9)

    def test_hamiltonian_rejects_asymmetric(self):
        with self.assertRaises(ValueError):
            QuadraticHamiltonian(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_separability(self):
        self.assertTrue(QuadraticHamiltonian.harmonic().is_separable)
        self.assertFalse(QuadraticHamiltonian.from_coefficients(1.0, 0.5, 1.0).is_separable)

    def test_linear_hamiltonian(self):
        H = LinearHamiltonian(PhasePoint(1.0, 0.5))
        z = PhasePoint(2.0, -1.0)
        self.assertAlmostEqual(H(z), symplectic_form(z, H.z0))
        np.testing.assert_allclose(H.flow(z, 2.0).vector, [4.0, 0.0])


class TestCayleyChirp(unittest.TestCase):
    def test_rotation(self):
        for t in (0.5, 1.0, 2.5):
            np.testing.assert_allclose(cayley_chirp(rotation(t)), 0.5 / np.tan(t / 2) * np.eye(2), atol=1e-12)

    def test_symmetric(self):
        S = flow_matrix(QuadraticHamiltonian.from_coefficients(1.0, 0.4, 2.0), 0.8)
        Q = cayley_chirp(S)
        np.testing.assert_allclose(Q, Q.T, atol=1e-14)

    def test_singular_raises(self):
        with self.assertRaises(SingularCayleyError) as ctx:
            cayley_chirp(SHEAR)
        self.assertIn("split_for_singular", str(ctx.exception))
        with self.assertRaises(SingularCayleyError):
            cayley_chirp(np.eye(2))


class TestSplitForSingular(unittest.TestCase):
    def check_split(self, S: SymplecticMatrix):
        S1, S2 = split_for_singular(S)
        np.testing.assert_allclose((S1 @ S2).entries, S.entries, atol=1e-10)
        self.assertGreater(abs(S1.det_minus_identity()), 1e-6)
        self.assertGreater(abs(S2.det_minus_identity()), 1e-6)

    def test_shear(self):
        self.check_split(SymplecticMatrix(SHEAR))

    def test_identity_and_minus_identity(self):
        self.check_split(SymplecticMatrix.identity())
        self.check_split(SymplecticMatrix(-np.eye(2)))

    def test_regular_matrix_also_splits(self):
        self.check_split(rotation(1.0))

    def test_deterministic(self):
        a = split_for_singular(SymplecticMatrix(SHEAR))
        b = split_for_singular(SymplecticMatrix(SHEAR))
        np.testing.assert_array_equal(a[1].entries, b[1].entries)


if __name__ == '__main__':
    unittest.main()
