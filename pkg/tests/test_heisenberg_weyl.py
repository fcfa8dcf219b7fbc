"""
Tests for the standard and extended translation operators and the weighted
translation sums.
"""

import os
import unittest
from unittest import mock

import numpy as np

from src.calculus.grid import GridSpec, PhaseField, coherent_state, gaussian_field, l2_norm
from src.calculus.heisenberg_weyl import (
    HWOperator,
    composition_phase,
    hw_config,
    hw_inverse,
    hw_phase,
    translate_sum,
    translate_sum_config,
)
from src.calculus.symplectic import PhasePoint, symplectic_form

GRID = GridSpec(64, 20.0)


def random_point(rng, radius=1.0):
    return PhasePoint(*rng.uniform(-radius, radius, size=2))


class TestTranslations(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(42)
        self.field = gaussian_field(GRID)
        self.psi = coherent_state(GRID)

    def test_identity(self):
        np.testing.assert_array_equal(hw_phase(PhasePoint.origin(), self.field).values, self.field.values)
        np.testing.assert_array_equal(hw_config(PhasePoint.origin(), self.psi).values, self.psi.values)

    def test_moves_gaussian(self):
        z0 = PhasePoint(1.0, -0.5)
        moved = hw_phase(z0, self.field)
        X, P = GRID.mesh()
        phase = np.exp(1j * (-0.5 * X - 0.5 * -0.5 * 1.0))
        expected = phase * gaussian_field(GRID, z0).values
        np.testing.assert_allclose(moved.values, expected, atol=1e-10)

    def test_coherent_state_is_translated_ground_state(self):
        z0 = PhasePoint(0.8, 1.3)
        np.testing.assert_allclose(hw_config(z0, self.psi).values, coherent_state(GRID, z0).values, atol=1e-10)

    def test_composition_law(self):
        for _ in range(50):
            z1, z2 = random_point(self.rng), random_point(self.rng)
            c = composition_phase(z1, z2, GRID.hbar)
            lhs = hw_phase(z1, hw_phase(z2, self.field))
            rhs = hw_phase(z1 + z2, self.field) * c
            self.assertLessEqual(l2_norm(lhs - rhs) / l2_norm(self.field), 1e-10)
            lhs = hw_config(z1, hw_config(z2, self.psi))
            rhs = hw_config(z1 + z2, self.psi) * c
            self.assertLessEqual(l2_norm(lhs - rhs) / l2_norm(self.psi), 1e-10)

    def test_commutator_phase(self):
        for _ in range(20):
            z1, z2 = random_point(self.rng), random_point(self.rng)
            lhs = hw_phase(z1, hw_phase(z2, self.field))
            rhs = hw_phase(z2, hw_phase(z1, self.field)) * np.exp(1j * symplectic_form(z1, z2))
            self.assertLessEqual(l2_norm(lhs - rhs) / l2_norm(self.field), 1e-10)

    def test_inverse_and_unitarity(self):
        shape = (GRID.N, GRID.N)
        noise = PhaseField(GRID, self.rng.standard_normal(shape) + 1j * self.rng.standard_normal(shape))
        field = gaussian_field(GRID, PhasePoint(0.5, -0.5))
        for _ in range(10):
            z0 = random_point(self.rng, 2.0)
            T = HWOperator(z0)
            self.assertAlmostEqual(l2_norm(T(noise)), l2_norm(noise), delta=1e-12 * l2_norm(noise))
            back = hw_inverse(z0)(T(field))
            self.assertLessEqual(l2_norm(back - field) / l2_norm(field), 1e-10)

    def test_operator_dispatch_and_compose(self):
        z1, z2 = PhasePoint(0.4, 0.1), PhasePoint(-0.2, 0.6)
        c, T12 = HWOperator(z1).compose(HWOperator(z2), GRID.hbar)
        np.testing.assert_allclose(T12.z0.vector, (z1 + z2).vector)
        self.assertAlmostEqual(c, np.exp(0.5j * symplectic_form(z1, z2)))
        self.assertEqual(HWOperator(z1)(self.psi).values.shape, (GRID.N,))

    def test_rejects_n2(self):
        with self.assertRaises(ValueError):
            hw_phase(PhasePoint.origin(2), self.field)


class TestTranslateSum(unittest.TestCase):
    def setUp(self):
        self.grid = GridSpec(16, 8.0)
        self.field = gaussian_field(self.grid, PhasePoint(0.5, 0.5))

    def direct(self, weights):
        total = PhaseField.zeros(self.grid)
        for j in range(self.grid.N):
            for k in range(self.grid.N):
                if weights[j, k] != 0:
                    u = PhasePoint(self.grid.x[j], self.grid.p[k])
                    total = total + hw_phase(u, self.field) * weights[j, k]
        return total

    def test_single_weight_is_translation(self):
        weights = np.zeros((16, 16), dtype=complex)
        weights[10, 5] = 2.0 - 1.0j
        expected = self.direct(weights)
        np.testing.assert_allclose(translate_sum(weights, self.field).values, expected.values, atol=1e-12)

    def test_matches_direct_sum(self):
        rng = np.random.default_rng(8)
        weights = np.zeros((16, 16), dtype=complex)
        idx = rng.integers(0, 16, size=(12, 2))
        weights[idx[:, 0], idx[:, 1]] = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        np.testing.assert_allclose(translate_sum(weights, self.field).values, self.direct(weights).values,
                                   atol=1e-11)

    def test_worker_count_does_not_change_result(self):
        rng = np.random.default_rng(0)
        weights = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        with mock.patch.dict(os.environ, {"TFPS_N_JOBS": "1"}):
            serial = translate_sum(weights, self.field).values
        with mock.patch.dict(os.environ, {"TFPS_N_JOBS": "3"}):
            threaded = translate_sum(weights, self.field).values
        np.testing.assert_array_equal(serial, threaded)

    def test_zero_weights(self):
        result = translate_sum(np.zeros((16, 16)), self.field)
        np.testing.assert_array_equal(result.values, 0.0)

    def test_shape_checked(self):
        with self.assertRaises(ValueError):
            translate_sum(np.zeros((8, 8)), self.field)

    def test_config_analogue(self):
        psi = coherent_state(self.grid, PhasePoint(0.2, -0.4))
        weights = np.zeros((16, 16), dtype=complex)
        weights[3, 12] = 0.5
        weights[9, 1] = -1.5j
        expected = sum(
            (hw_config(PhasePoint(self.grid.x[j], self.grid.p[k]), psi) * weights[j, k]
             for j, k in [(3, 12), (9, 1)]),
            start=psi * 0.0,
        )
        np.testing.assert_allclose(translate_sum_config(weights, psi).values, expected.values, atol=1e-12)


if __name__ == '__main__':
    unittest.main()
