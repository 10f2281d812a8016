import unittest
from unittest.case import TestCase

from nvcavity.base import DomainError
from nvcavity.geometry import AxisymmetricGeometry
from nvcavity.solvers import analytic_cylindrical_mode
from nvcavity.spec_file import parse_spec_text
from nvcavity.tuning import tune_axisymmetric, tune_geometry
from nvcavity.utils.callbacks import TuningCallback

TARGET_HZ = 3.2e9
CELL = 2e-3

TUNABLE_CYLINDER = """\
geometry:
  variant: axisymmetric
  outer_radius: 0.07
  height: 0.1
mesh:
  target_cell: 2.0e-3
solver:
  window: [2.8e+9, 3.6e+9]
tuning:
  parameter: outer_radius
  target_hz: 3.2e+9
  bracket: [0.05, 0.09]
"""


class TestTuning(TestCase):
    def setUp(self) -> None:
        self.geometry = AxisymmetricGeometry(outer_radius=0.07, height=0.1)

    def test_radius_tuning(self) -> None:
        callback = TuningCallback("outer_radius", TARGET_HZ)
        tuned, frequency = tune_axisymmetric(
            self.geometry,
            CELL,
            "outer_radius",
            TARGET_HZ,
            (0.05, 0.09),
            callback=callback,
            progress=False,
        )
        self.assertAlmostEqual(frequency / TARGET_HZ, 1.0, delta=1e-3)
        self.assertEqual(tuned.height, 0.1)
        exact = analytic_cylindrical_mode(tuned.outer_radius, 0.1, "TE", 0, 1, 1)
        self.assertAlmostEqual(exact / TARGET_HZ, 1.0, delta=1e-2)
        self.assertAlmostEqual(tuned.outer_radius / 0.06466, 1.0, delta=1e-2)

        trace = callback.trace
        self.assertGreaterEqual(trace.shape[0], 3)
        self.assertEqual(list(trace["outer_radius"][:2]), [0.05, 0.09])
        self.assertAlmostEqual(trace["frequency_hz"][0] / 3.95e9, 1.0, delta=1e-2)
        self.assertAlmostEqual(trace["frequency_hz"][1] / 2.525e9, 1.0, delta=1e-2)

    def test_early_stop(self) -> None:
        callback = TuningCallback("outer_radius", TARGET_HZ, tolerance_hz=50e6)
        _, frequency = tune_axisymmetric(
            self.geometry,
            CELL,
            "outer_radius",
            TARGET_HZ,
            (0.05, 0.09),
            callback=callback,
            progress=False,
        )
        self.assertLess(abs(frequency - TARGET_HZ), 50e6)
        self.assertLess(abs(callback.trace["error_hz"].iloc[-1]), 50e6)

    def test_bracket_must_enclose_target(self) -> None:
        with self.assertRaises(DomainError):
            tune_axisymmetric(
                self.geometry, CELL, "outer_radius", TARGET_HZ, (0.08, 0.09),
                progress=False,
            )
        with self.assertRaises(DomainError):
            tune_axisymmetric(
                self.geometry, CELL, "outer_radius", TARGET_HZ, (0.09, 0.05),
                progress=False,
            )
        with self.assertRaises(DomainError):
            tune_axisymmetric(
                self.geometry, CELL, "radius", TARGET_HZ, (0.05, 0.09), progress=False
            )

    def test_tune_spec(self) -> None:
        spec = parse_spec_text(TUNABLE_CYLINDER)
        tuned_spec, mode = tune_geometry(spec, progress=False)
        self.assertAlmostEqual(mode.frequency / TARGET_HZ, 1.0, delta=1e-3)
        assert isinstance(tuned_spec.geometry, AxisymmetricGeometry)
        self.assertNotEqual(tuned_spec.geometry.outer_radius, 0.07)
        self.assertEqual(tuned_spec.window, spec.window)
        self.assertTrue(mode.has_field)

        untunable = parse_spec_text(TUNABLE_CYLINDER.split("tuning:")[0])
        with self.assertRaises(DomainError):
            tune_geometry(untunable, progress=False)


if __name__ == "__main__":
    unittest.main()
