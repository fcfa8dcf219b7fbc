"""
Tests for TFGRID v1 dumps.
"""

import os
import tempfile
import unittest

import numpy as np

from src.calculus.errors import DumpFormatError
from src.calculus.grid import ConfigField, GridSpec, PhaseField, coherent_state, gaussian_field
from src.calculus.symplectic import PhasePoint
from src.calculus.tfgrid import MAGIC, format_tfgrid, parse_tfgrid, read_tfgrid, write_tfgrid


class TestTFGrid(unittest.TestCase):
    def setUp(self):
        self.grid = GridSpec(8, 4.0, 0.5)

    def test_phase_field_exact(self):
        rng = np.random.default_rng(9)
        field = PhaseField(self.grid, rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
        back = parse_tfgrid(format_tfgrid(field))
        self.assertIsInstance(back, PhaseField)
        self.assertEqual(back.grid, self.grid)
        np.testing.assert_array_equal(back.values, field.values)

    def test_config_field_layout(self):
        psi = coherent_state(self.grid, PhasePoint(0.3, 0.2))
        text = format_tfgrid(psi)
        lines = text.splitlines()
        self.assertEqual(lines[0], MAGIC)
        self.assertEqual(lines[1], "N 8")
        self.assertEqual(len(lines[5].split()), 3)
        back = parse_tfgrid(text)
        self.assertIsInstance(back, ConfigField)
        np.testing.assert_array_equal(back.values, psi.values)

    def test_timestamp_line_is_optional(self):
        field = gaussian_field(self.grid)
        stamped = format_tfgrid(field, timestamp=True)
        self.assertTrue(stamped.splitlines()[1].startswith("# written"))
        self.assertNotIn("written", format_tfgrid(field))
        np.testing.assert_array_equal(parse_tfgrid(stamped).values, field.values)

    def test_deterministic_bytes(self):
        field = gaussian_field(self.grid, PhasePoint(0.1, -0.2))
        with tempfile.TemporaryDirectory() as tmp:
            a, b = os.path.join(tmp, "a.tfgrid"), os.path.join(tmp, "sub", "b.tfgrid")
            write_tfgrid(field, a)
            write_tfgrid(field, b)
            with open(a, "rb") as fa, open(b, "rb") as fb:
                self.assertEqual(fa.read(), fb.read())
            np.testing.assert_array_equal(read_tfgrid(b).values, field.values)

    def test_malformed(self):
        good = format_tfgrid(coherent_state(self.grid)).splitlines()
        cases = {
            "magic": ["# NOT A DUMP"] + good[1:],
            "header key": [good[0], "M 8"] + good[2:],
            "incompatible Lp": good[:3] + ["Lp 1.0"] + good[4:],
            "missing rows": good[:-1],
            "bad number": good[:-1] + ["7 abc 0"],
            "repeated index": good[:-1] + [good[-2]],
            "empty": [],
        }
        for name, lines in cases.items():
            with self.subTest(name=name):
                with self.assertRaises(DumpFormatError):
                    parse_tfgrid("\n".join(lines))

    def test_error_names_line(self):
        lines = format_tfgrid(coherent_state(self.grid)).splitlines()
        lines[7] = "2 x y"
        with self.assertRaisesRegex(DumpFormatError, "line 8"):
            parse_tfgrid("\n".join(lines))


if __name__ == '__main__':
    unittest.main()
