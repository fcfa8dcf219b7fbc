"""
Tests for the tfps command line: subcommands, outputs and exit codes.
"""

import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

import numpy as np
import pandas as pd

from src.calculus.grid import ConfigField, GridSpec, PhaseField, coherent_state
from src.calculus.symplectic import PhasePoint
from src.calculus.tfgrid import read_tfgrid, write_tfgrid
from src.calculus.wavepacket import wavepacket_forward
from src.harness.cli import EXIT_FAILED, EXIT_OK, EXIT_OUTPUT, EXIT_USAGE, main

SMALL_GRID = "[grid]\nN = 64\nLx = 16\n"
LINEAR_RUN = SMALL_GRID + """
[state]
center = 0.5 0
[hamiltonian]
preset = linear
z0 = 1 0.5
[run]
t_final = 0.1
dt = 0.01
record_every = 5
"""


class TestCLI(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        self._env = mock.patch.dict(os.environ, {})
        self._env.start()

    def tearDown(self):
        self._env.stop()
        self._tmp.cleanup()

    def write(self, name, text):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_usage_errors(self):
        self.assertEqual(self.run_cli()[0], EXIT_USAGE)
        self.assertEqual(self.run_cli("verify", "--suite", "gauge")[0], EXIT_USAGE)
        self.assertEqual(self.run_cli("verify", "--n-jobs", "0")[0], EXIT_USAGE)
        self.assertEqual(self.run_cli("evolve")[0], EXIT_USAGE)

    def test_bad_config(self):
        config = self.write("bad.ini", "[grid]\nN = 7\n")
        code, _, err = self.run_cli("evolve", "--config", config, "--out", self.tmp)
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("grid.N", err)
        missing = os.path.join(self.tmp, "missing.ini")
        self.assertEqual(self.run_cli("verify", "--config", missing)[0], EXIT_USAGE)

    def test_verify_writes_report(self):
        config = self.write("small.ini", SMALL_GRID)
        reports = os.path.join(self.tmp, "reports")
        code, out, _ = self.run_cli("verify", "--suite", "fourier", "--config", config, "--out", reports,
                                    "--no-timestamp")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("Verification passed: 4/4", out)
        self.assertFalse(out.startswith("["))
        self.assertTrue(os.path.exists(os.path.join(reports, "verification_fourier.md")))

    def test_verify_failure_exit_code(self):
        config = self.write("small.ini", SMALL_GRID)
        failing = {'suite': 'fourier', 'grid': {'N': 64, 'Lx': 16.0, 'Lp': 1.0, 'hbar': 1.0},
                   'checks': [{'suite': 'fourier', 'check': 'x', 'error': 1.0, 'tolerance': 0.1,
                               'passed': False}],
                   'validation_passed': False}
        with mock.patch("src.harness.cli.validate_suite", return_value=failing):
            code, out, _ = self.run_cli("verify", "--config", config)
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("FAIL", out)

    def test_evolve_linear(self):
        config = self.write("linear.ini", LINEAR_RUN)
        out_dir = os.path.join(self.tmp, "run")
        code, out, _ = self.run_cli("evolve", "--config", config, "--out", out_dir, "--no-timestamp")
        self.assertEqual(code, EXIT_OK)
        manifest = pd.read_csv(os.path.join(out_dir, "manifest.csv"))
        self.assertEqual(len(manifest), 3)
        self.assertIsInstance(read_tfgrid(os.path.join(out_dir, manifest["file"].iloc[-1])), PhaseField)
        self.assertIn("final norm drift", out)
        error = float(out.split("relative L2 error:")[1].split()[0])
        self.assertLessEqual(error, 1e-6)

    def test_evolve_zero_time(self):
        config = self.write("zero.ini", SMALL_GRID + "[run]\nt_final = 0\ndt = 0.1\n")
        out_dir = os.path.join(self.tmp, "run")
        code, out, _ = self.run_cli("evolve", "--config", config, "--out", out_dir, "--no-timestamp")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(pd.read_csv(os.path.join(out_dir, "manifest.csv"))), 1)
        self.assertNotIn("relative L2 error", out)

    def test_transform_forward_and_adjoint(self):
        grid = GridSpec(64, 16.0)
        psi = coherent_state(grid, PhasePoint(0.5, -0.5))
        source = os.path.join(self.tmp, "psi.tfgrid")
        write_tfgrid(psi, source)
        image_path = os.path.join(self.tmp, "image.tfgrid")
        code, out, _ = self.run_cli("transform", source, "--out", image_path)
        self.assertEqual(code, EXIT_OK)
        self.assertLessEqual(float(out.split("isometry defect:")[1].split()[0]), 1e-10)
        self.assertIsInstance(read_tfgrid(image_path), PhaseField)

        back_path = os.path.join(self.tmp, "back.tfgrid")
        code, out, _ = self.run_cli("transform", image_path, "--out", back_path, "--adjoint")
        self.assertEqual(code, EXIT_OK)
        self.assertLessEqual(float(out.split("range defect:")[1].split()[0]), 1e-8)
        back = read_tfgrid(back_path)
        self.assertIsInstance(back, ConfigField)
        self.assertLessEqual(abs(back.values - psi.values).max(), 1e-10)

    def test_transform_window_choice(self):
        grid = GridSpec(64, 20.0)
        psi = coherent_state(grid, PhasePoint(-0.5, 0.3))
        source = os.path.join(self.tmp, "psi.tfgrid")
        write_tfgrid(psi, source)
        image_path = os.path.join(self.tmp, "image.tfgrid")
        self.assertEqual(self.run_cli("transform", source, "--out", image_path, "--window", "hermite")[0],
                         EXIT_USAGE)

        def shifted(g):
            return coherent_state(g, PhasePoint(0.0, 0.5))

        with mock.patch.dict("src.harness.cli.WINDOWS", {"shifted": shifted}):
            code, _, _ = self.run_cli("transform", source, "--out", image_path, "--window", "shifted")
        self.assertEqual(code, EXIT_OK)
        expected = wavepacket_forward(psi, shifted(grid))
        np.testing.assert_allclose(read_tfgrid(image_path).values, expected.values, atol=1e-12)
        self.assertGreater(abs(expected.values - wavepacket_forward(psi).values).max(), 1e-3)

    def test_evolve_exact_harmonic(self):
        config = self.write("exact.ini", "[grid]\nN = 64\nLx = 20\n[hamiltonian]\npreset = harmonic\n"
                                         "[run]\nt_final = 0.2\ndt = 0.1\nmethod = EXACT\n")
        out_dir = os.path.join(self.tmp, "run")
        code, out, _ = self.run_cli("evolve", "--config", config, "--out", out_dir, "--no-timestamp")
        self.assertEqual(code, EXIT_OK)
        manifest = pd.read_csv(os.path.join(out_dir, "manifest.csv"))
        self.assertEqual(len(manifest), 3)
        np.testing.assert_allclose(manifest["norm"], 1.0, atol=1e-3)
        self.assertNotIn("relative L2 error", out)

    def test_transform_wrong_kind(self):
        grid = GridSpec(16, 8.0)
        source = os.path.join(self.tmp, "psi.tfgrid")
        write_tfgrid(coherent_state(grid), source)
        code, _, err = self.run_cli("transform", source, "--out", os.path.join(self.tmp, "x"), "--adjoint")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("phase-space", err)

    def test_malformed_and_missing_dump(self):
        source = self.write("broken.tfgrid", "# TFGRID v1\nN 8\nLx nope\n")
        out = os.path.join(self.tmp, "out.tfgrid")
        self.assertEqual(self.run_cli("transform", source, "--out", out)[0], EXIT_USAGE)
        missing = os.path.join(self.tmp, "missing.tfgrid")
        self.assertEqual(self.run_cli("transform", missing, "--out", out)[0], EXIT_USAGE)
        self.assertFalse(os.path.exists(out))

    def test_unwritable_output(self):
        blocker = self.write("blocker", "not a directory")
        config = self.write("zero.ini", SMALL_GRID + "[run]\nt_final = 0\ndt = 0.1\n")
        code, _, err = self.run_cli("evolve", "--config", config, "--out", os.path.join(blocker, "run"))
        self.assertEqual(code, EXIT_OUTPUT)
        self.assertIn("cannot write output", err)


if __name__ == '__main__':
    unittest.main()
