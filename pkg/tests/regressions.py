import unittest
from unittest.case import TestCase

import numpy as np
from nvcavity.cli import solve_spec
from nvcavity.fields import FieldSolution
from nvcavity.geometry import AxisymmetricGeometry, Region, build_mesh, uniform_mesh
from nvcavity.materials import builtin_material
from nvcavity.observables import filling_factors
from nvcavity.solvers import (
    analytic_cylindrical_mode,
    lowest_te0_frequency,
    solve_axisymmetric_te0,
)
from nvcavity.spec_file import parse_spec, shipped_spec_path
from nvcavity.utils.table_data import compare_table, load_table1

N_RANDOM_GEOMETRIES = 20
N_RANDOM_PARTITIONS = 100
DIELECTRICS = ["sapphire", "diamond", "fused-silica"]


class TestAll(TestCase):
    def setUp(self) -> None:
        self.rng = np.random.RandomState(42)

    def test_table_reproduction(self) -> None:
        report = compare_table(load_table1())
        self.assertTrue(report.passed, report.failures)
        strict = compare_table(load_table1(), g_tolerance_mhz=0.0, c_tolerance=0.0)
        self.assertEqual(strict.failures, list(strict.rows["mode_label"][1:]))

    def test_second_order_convergence(self) -> None:
        exact = [
            analytic_cylindrical_mode(0.07, 0.1, "TE", 0, n, p)
            for n, p in ((1, 1), (1, 2), (2, 1))
        ]
        errors = []
        for n_r, n_z in ((28, 40), (56, 80), (112, 160)):
            modes = solve_axisymmetric_te0(
                uniform_mesh(0.07, 0.1, n_r, n_z), (2.9e9, 5.3e9), n_modes=3
            )
            self.assertEqual(len(modes), 3)
            errors.append([abs(mode.frequency - f) for mode, f in zip(modes, exact)])
        errors_array = np.array(errors)
        orders = np.log2(errors_array[:-1] / errors_array[1:])
        self.assertTrue(np.all(orders >= 1.8), orders)
        self.assertTrue(np.all(errors_array[-1] / np.array(exact) < 5e-3))

        millimetre = lowest_te0_frequency(uniform_mesh(0.07, 0.1, 70, 100))
        self.assertLess(abs(millimetre - exact[0]) / exact[0], 5e-3)

    def random_geometry(self) -> AxisymmetricGeometry:
        outer_radius = self.rng.uniform(6e-3, 10e-3)
        height = self.rng.uniform(8e-3, 12e-3)
        r_max = self.rng.uniform(0.3, 0.7) * outer_radius
        thickness = self.rng.uniform(0.2, 0.5) * height
        z_min = self.rng.uniform(0.1, 0.9 - thickness / height) * height
        material = DIELECTRICS[self.rng.randint(len(DIELECTRICS))]
        return AxisymmetricGeometry(
            outer_radius=outer_radius,
            height=height,
            regions=(
                Region(
                    r_min=0.0,
                    r_max=r_max,
                    z_min=z_min,
                    z_max=z_min + thickness,
                    material=builtin_material(material),
                    label="puck",
                ),
            ),
        )

    def test_equipartition_on_random_geometries(self) -> None:
        for _ in range(N_RANDOM_GEOMETRIES):
            mesh = build_mesh(self.random_geometry(), 5e-4)
            lowest = lowest_te0_frequency(mesh)
            modes = solve_axisymmetric_te0(mesh, (0.99 * lowest, 1.01 * lowest))
            self.assertTrue(modes)
            mode = modes[0]
            self.assertLess(mode.energy_imbalance(), 1e-8)
            assert mode.field is not None
            factors = filling_factors(mode.field)
            self.assertAlmostEqual(sum(factors.p_m.values()), 1.0, places=12)
            self.assertAlmostEqual(sum(factors.p_e.values()), 1.0, places=12)

    def test_filling_factor_closure_on_random_partitions(self) -> None:
        mesh = uniform_mesh(0.07, 0.1, 28, 40)
        mode = solve_axisymmetric_te0(mesh, (2.8e9, 3.2e9))[0]
        field = mode.field
        assert field is not None
        for _ in range(N_RANDOM_PARTITIONS):
            n_labels = self.rng.randint(2, 6)
            labels = ["part{}".format(i) for i in range(n_labels)]
            partition = self.rng.randint(n_labels, size=mesh.shape)
            relabelled = FieldSolution(
                mesh=mesh.with_partition(partition, labels),
                omega=field.omega,
                e_phi=field.e_phi,
                h_r_edges=field.h_r_edges,
                h_z_edges=field.h_z_edges,
            )
            factors = filling_factors(relabelled)
            self.assertAlmostEqual(sum(factors.p_m.values()), 1.0, places=12)
            self.assertAlmostEqual(sum(factors.p_e.values()), 1.0, places=12)
            for value in factors.p_m.values():
                self.assertTrue(0.0 <= value <= 1.0)

    def test_double_split_design(self) -> None:
        spec, modes = solve_spec(
            parse_spec(shipped_spec_path("double_split")), progress=False
        )
        self.assertTrue(modes)
        mode = modes[0]
        self.assertEqual(mode.mode_id, "TE01δ")
        self.assertLess(abs(mode.frequency - 2.87e9), 20e6)
        assert mode.field is not None
        factors = filling_factors(mode.field)
        self.assertGreaterEqual(factors.p_m["diamond"], 0.08)
        self.assertLess(factors.p_e["diamond"], factors.p_m["diamond"])


if __name__ == "__main__":
    unittest.main()
