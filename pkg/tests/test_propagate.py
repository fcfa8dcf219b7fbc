"""
Tests for evolution plans, exact and numerical evolution, and history export.
"""

import os
import tempfile
import unittest

import numpy as np
import pandas as pd

from src.calculus.grid import GridSpec, coherent_state, gaussian_field, l2_norm
from src.calculus.heisenberg_weyl import hw_phase
from src.calculus.metaplectic import fit_phase
from src.calculus.symplectic import LinearHamiltonian, PhasePoint, QuadraticHamiltonian
from src.calculus.tfgrid import read_tfgrid
from src.calculus.wavepacket import wavepacket_forward
from src.evolution.propagate import (
    EvolutionPlan,
    Method,
    evolve_exact,
    evolve_numeric,
    evolve_quadratic_exact,
    evolve_time_reversal,
    export_history,
    generator_linear,
    harmonic_config_solution,
    norm_drift,
)
from src.evolution.stepping import SeparableHamiltonian

GRID = GridSpec(64, 16.0)


class TestEvolutionPlan(unittest.TestCase):
    def test_method_coercion(self):
        plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), 1.0, 0.1, method="rk4")
        self.assertIs(plan.method, Method.RK4)
        self.assertEqual(plan.n_steps, 10)

    def test_validation(self):
        H = QuadraticHamiltonian.harmonic()
        for kwargs in ({"t_final": 1.0, "dt": 0.0}, {"t_final": -1.0, "dt": 0.1},
                       {"t_final": 0.1, "dt": 0.5}, {"t_final": 1.0, "dt": 0.1, "record_every": 0}):
            with self.subTest(**kwargs):
                with self.assertRaises(ValueError):
                    EvolutionPlan(H, **kwargs)
        with self.assertRaises(ValueError):
            EvolutionPlan(H, 1.0, 0.1, method="LEAPFROG")

    def test_exact_needs_linear_or_quadratic(self):
        H = SeparableHamiltonian.from_samples(GRID, "free", np.zeros(2 * GRID.N))
        with self.assertRaises(ValueError):
            EvolutionPlan(H, 1.0, 0.1, method=Method.EXACT)

    def test_record_times_include_final(self):
        plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), 1.0, 0.1, record_every=4)
        self.assertEqual([s for s, _ in plan.record_times()], [0, 4, 8, 10])
        self.assertAlmostEqual(plan.record_times()[-1][1], 1.0)

    def test_zero_time(self):
        plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), 0.0, 0.1)
        self.assertEqual(plan.record_times(), [(0, 0.0)])


class TestEvolution(unittest.TestCase):
    def setUp(self):
        self.field = gaussian_field(GRID, PhasePoint(0.5, -0.5))

    def test_zero_time_history(self):
        history = evolve_numeric(EvolutionPlan(QuadraticHamiltonian.harmonic(), 0.0, 0.1), self.field)
        self.assertEqual(len(history), 1)
        np.testing.assert_array_equal(history[0][1].values, self.field.values)

    def test_linear_exact_and_numeric_agree(self):
        H = LinearHamiltonian(PhasePoint(1.0, 0.5))
        exact = evolve_exact(H, 0.8, self.field)
        np.testing.assert_allclose(exact.values, hw_phase(PhasePoint(0.8, 0.4), self.field).values)
        for method in (Method.SPLIT_STEP, Method.RK4):
            with self.subTest(method=method):
                history = evolve_numeric(EvolutionPlan(H, 0.8, 1e-3, method=method, record_every=400), self.field)
                self.assertEqual(len(history), 3)
                self.assertLessEqual(l2_norm(history[-1][1] - exact), 1e-5)

    def test_generator_matches_time_derivative(self):
        z0 = PhasePoint(0.7, -0.3)
        sigma = generator_linear(z0)
        h = 1e-4
        forward = evolve_exact(LinearHamiltonian(z0), h, self.field)
        backward = evolve_exact(LinearHamiltonian(z0), -h, self.field)
        derivative = (forward - backward) * (1j / (2 * h))
        self.assertLessEqual(l2_norm(derivative - sigma(self.field)), 1e-6)

    def test_norm_drift(self):
        plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), 1.0, 0.01, record_every=25)
        drift = norm_drift(evolve_numeric(plan, self.field))
        self.assertEqual(len(drift), 5)
        self.assertTrue(all(abs(d) <= 1e-10 for _, d in drift))
        with self.assertRaises(ValueError):
            norm_drift([])

    def test_time_reversal(self):
        plan = EvolutionPlan(QuadraticHamiltonian.from_coefficients(1.0, 0.0, 1.0), 0.5, 0.01)
        self.assertLessEqual(evolve_time_reversal(plan, self.field), 1e-10)
        rk4 = EvolutionPlan(QuadraticHamiltonian.from_coefficients(1.0, 0.2, 1.0), 0.5, 0.01, method=Method.RK4)
        self.assertLessEqual(evolve_time_reversal(rk4, self.field), 2e-3)


class TestQuadraticAgreement(unittest.TestCase):
    """Exact, split-step and closed-form evolution on the reference grid."""

    GRID = GridSpec(128, 20.0)

    def setUp(self):
        self.H = QuadraticHamiltonian.harmonic()
        self.center = PhasePoint(1.0, 0.5)
        self.start = wavepacket_forward(coherent_state(self.GRID, self.center))

    def relative(self, a, b):
        return l2_norm(a - b) / l2_norm(self.start)

    def test_harmonic_quarter_period(self):
        t = np.pi / 2
        exact = evolve_exact(self.H, t, self.start)
        split = evolve_numeric(EvolutionPlan(self.H, t, 1e-3), self.start)[-1][1]
        closed = wavepacket_forward(harmonic_config_solution(self.GRID, self.center, t))
        self.assertLessEqual(self.relative(exact, split), 1e-3)
        self.assertLessEqual(self.relative(exact, closed), 1e-3)
        self.assertLessEqual(self.relative(split, closed), 1e-3)

    def test_harmonic_full_period_flips_sign(self):
        out = evolve_exact(self.H, 2 * np.pi, self.start)
        self.assertLessEqual(abs(fit_phase(out, self.start) + 1.0), 1e-3)
        self.assertLessEqual(self.relative(out, -self.start), 1e-3)

    def test_ground_state_is_stationary(self):
        ground = wavepacket_forward(coherent_state(self.GRID))
        for t in (0.5, 1.0):
            with self.subTest(t=t):
                out = evolve_quadratic_exact(self.H, t, ground)
                self.assertLessEqual(l2_norm(out - ground * np.exp(-0.5j * t)) / l2_norm(ground), 1e-3)

    def test_free_particle(self):
        H = QuadraticHamiltonian.free_particle()
        field = gaussian_field(self.GRID, PhasePoint(0.5, -0.5))
        exact = evolve_exact(H, 1.0, field)
        split = evolve_numeric(EvolutionPlan(H, 1.0, 1e-3), field)[-1][1]
        self.assertLessEqual(l2_norm(exact - split) / l2_norm(field), 1e-3)


class TestExport(unittest.TestCase):
    def test_manifest_and_snapshots(self):
        field = gaussian_field(GridSpec(16, 8.0))
        plan = EvolutionPlan(QuadraticHamiltonian.harmonic(), 0.2, 0.05, record_every=2)
        history = evolve_numeric(plan, field)
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "run")
            manifest = export_history(history, out)
            table = pd.read_csv(manifest)
            self.assertEqual(list(table.columns), ["t", "norm", "file"])
            self.assertEqual(list(table["file"]), ["snapshot_00000.tfgrid", "snapshot_00001.tfgrid",
                                                   "snapshot_00002.tfgrid"])
            np.testing.assert_allclose(table["t"], [0.0, 0.1, 0.2])
            last = read_tfgrid(os.path.join(out, table["file"].iloc[-1]))
            np.testing.assert_array_equal(last.values, history[-1][1].values)

            with open(manifest, "rb") as f:
                first = f.read()
            export_history(history, out)
            with open(manifest, "rb") as f:
                self.assertEqual(f.read(), first)


if __name__ == '__main__':
    unittest.main()
