import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from typing import List, Tuple
from unittest.case import TestCase

import numpy as np
import pandas as pd
from nvcavity import __version__
from nvcavity.cli import EXIT_ERROR, EXIT_FAILED, EXIT_OK, main
from nvcavity.solvers import analytic_cylindrical_mode

COPLANAR = ["--p-m", "0.119", "--q0", "1905", "--frequency", "2.87e9"]
ENSEMBLE = ["--rho", "1.2e24", "--fwhm", "3e6"]


def run(argv: List[str]) -> Tuple[int, str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        code = main(argv + ["--no-progress"])
    return code, stdout.getvalue(), stderr.getvalue()


class TestCommandLine(TestCase):
    def setUp(self) -> None:
        self._temp_dir = tempfile.TemporaryDirectory()
        self.out = self._temp_dir.name

    def tearDown(self) -> None:
        self._temp_dir.cleanup()

    def read(self, name: str) -> pd.DataFrame:
        return pd.read_csv(os.path.join(self.out, name))

    def manifest(self) -> List[str]:
        with open(os.path.join(self.out, "manifest.txt")) as ifs:
            return ifs.read().splitlines()

    def test_materials(self) -> None:
        code, stdout, _ = run(["materials"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("rutile", stdout)
        code, _, _ = run(["materials", "--format", "csv", "--out", self.out])
        self.assertEqual(code, EXIT_OK)
        df = self.read("materials.csv")
        self.assertIn("copper", list(df["name"]))
        self.assertTrue(np.isnan(df.set_index("name").loc["copper", "eps_r"]))

    def test_table1(self) -> None:
        code, stdout, _ = run(["table1"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("reference", stdout)
        self.assertNotIn("FAIL", stdout)

        code, stdout, _ = run(["table1", "--g-tol", "0", "--c-tol", "0"])
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("failed rows", stdout)

        code, _, _ = run(["table1", "--format", "csv", "--out", self.out])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(self.read("table1_comparison.csv").shape[0], 8)
        manifest = self.manifest()
        self.assertEqual(manifest[0], "tool_version = {}".format(__version__))
        self.assertIn("passed = True", manifest)

    def test_report_explicit_inputs(self) -> None:
        argv = ["report", "--pathway", "calibrated", "--format", "csv"]
        argv += ["--out", self.out]
        code, _, _ = run(argv + COPLANAR + ENSEMBLE)
        self.assertEqual(code, EXIT_OK)
        df = self.read("coupling.csv")
        self.assertEqual(df.shape[0], 1)
        self.assertEqual(df["pathway"][0], "calibrated")
        self.assertAlmostEqual(df["g_c_mhz"][0], 51.18, delta=0.01)
        self.assertAlmostEqual(df["cooperativity"][0], 7.39, delta=0.02)
        self.assertEqual(df["regime"][0], "strong")

    def test_report_both_pathways(self) -> None:
        code, stdout, _ = run(["report", "--row", "coplanar"] + ENSEMBLE)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("inputs from table row coplanar", stdout)
        self.assertIn("pathway exact-si", stdout)
        self.assertIn("pathway calibrated", stdout)
        self.assertIn("differ by a constant factor", stdout)

    def test_report_usage_errors(self) -> None:
        code, _, stderr = run(["report", "--spec", "empty_cylinder"])
        self.assertEqual(code, EXIT_ERROR)
        self.assertTrue(stderr.startswith("error:"))

        code, _, _ = run(["report", "--row", "coplanar", "--p-m", "0.1"] + ENSEMBLE)
        self.assertEqual(code, EXIT_ERROR)
        code, _, _ = run(["report", "--row", "no-such-row"] + ENSEMBLE)
        self.assertEqual(code, EXIT_ERROR)
        argv = ["report", "--p-m", "1.5", "--q0", "10", "--frequency", "1e9"]
        code, _, _ = run(argv + ENSEMBLE)
        self.assertEqual(code, EXIT_ERROR)

    def test_empty_sample_is_weak(self) -> None:
        argv = ["report", "--pathway", "exact-si", "--p-m", "0", "--q0", "1905"]
        code, stdout, _ = run(argv + ["--frequency", "2.87e9"] + ENSEMBLE)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("regime          weak", stdout)

    def test_sweep(self) -> None:
        argv = ["sweep", "--pathway", "exact-si", "--out", self.out]
        argv += ["--p-m", "0.084", "--q0", "127000", "--frequency", "2.87e9"]
        argv += ENSEMBLE
        no_steps = ["--b-start", "0", "--b-stop", "1e-3", "--b-steps", "0"]
        code, _, _ = run(argv + no_steps)
        self.assertEqual(code, EXIT_ERROR)

        fields = ["--b-start", "2.5e-4", "--b-stop", "2.5e-4", "--b-steps", "1"]
        code, stdout, _ = run(argv + fields + ["--b-r", "2.5e-4"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("swept 1 fields", stdout)
        dispersion = self.read("dispersion.csv")
        self.assertEqual(
            list(dispersion.columns),
            ["b_tesla", "delta_rad_s", "omega_rad_s", "halfwidth_rad_s"],
        )
        self.assertEqual(dispersion.shape[0], 1)
        self.assertAlmostEqual(
            dispersion["omega_rad_s"][0] / (2 * np.pi * 2.87e9), 1.0, places=9
        )
        self.assertEqual(dispersion["delta_rad_s"][0], 0.0)
        spectra = self.read("spectra.csv")
        self.assertEqual(spectra.shape[0], 4001)
        self.assertIn("b_r_tesla = 0.00025", self.manifest())

    def test_sweep_rejects_both_pathways(self) -> None:
        argv = ["sweep", "--pathway", "both", "--out", self.out] + COPLANAR + ENSEMBLE
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                main(argv)

    def test_solve_empty_cylinder(self) -> None:
        argv = ["solve", "--spec", "empty_cylinder", "--format", "csv"]
        argv += ["--out", self.out]
        code, _, _ = run(argv)
        self.assertEqual(code, EXIT_OK)
        modes = self.read("modes.csv")
        self.assertEqual(modes.shape[0], 3)
        te011 = analytic_cylindrical_mode(0.07, 0.1, "TE", 0, 1, 1)
        self.assertAlmostEqual(modes["frequency_hz"][0] / te011, 1.0, delta=5e-3)
        self.assertTrue(np.allclose(modes["p_m_vacuum"], 1.0))
        manifest = self.manifest()
        self.assertIn("command = solve", manifest)
        self.assertIn("spec.geometry.variant = axisymmetric", manifest)

    def test_solve_reentrant_has_no_field(self) -> None:
        code, stdout, _ = run(["solve", "--spec", "reentrant"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("mode ", stdout)
        self.assertIn("n/a", stdout)

    def test_solve_empty_window(self) -> None:
        path = os.path.join(self.out, "low.yaml")
        with open(path, "w") as ofs:
            ofs.write(
                "geometry: {variant: cylindrical, radius: 0.07, height: 0.1}\n"
                "solver: {window: [1.0e+9, 1.5e+9]}\n"
            )
        code, _, stderr = run(["solve", "--spec", path])
        self.assertEqual(code, EXIT_FAILED)
        self.assertIn("no mode", stderr)

        code, _, stderr = run(["solve", "--spec", "no-such-design"])
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("available", stderr)


if __name__ == "__main__":
    unittest.main()
