import os
import tempfile
import unittest
from unittest.case import TestCase

import numpy as np
from nvcavity.base import DomainError, MaterialLookupError
from nvcavity.constants import CONSTANTS, D_OVER_H_NV, G_NV
from nvcavity.materials import (
    DIELECTRIC,
    METAL,
    Material,
    MaterialLibrary,
    builtin_material,
    default_library,
)


class TestConstants(TestCase):
    def test_hbar(self) -> None:
        self.assertEqual(CONSTANTS.h, 2 * np.pi * CONSTANTS.hbar)
        self.assertAlmostEqual(CONSTANTS.hbar / 1.054571817e-34, 1.0, places=8)

    def test_free_space(self) -> None:
        self.assertAlmostEqual(
            CONSTANTS.mu0 * CONSTANTS.eps0 * CONSTANTS.c ** 2, 1.0, places=9
        )
        self.assertAlmostEqual(CONSTANTS.eta0, 376.730, places=2)

    def test_nv(self) -> None:
        self.assertEqual(G_NV, 2.0028)
        self.assertEqual(D_OVER_H_NV, 2.877e9)


class TestMaterials(TestCase):
    def test_builtin(self) -> None:
        copper = builtin_material("copper")
        self.assertTrue(copper.is_metal)
        self.assertAlmostEqual(copper.r_surface, 5.77e-3)
        diamond = builtin_material("diamond")
        self.assertEqual(diamond.kind, DIELECTRIC)
        self.assertAlmostEqual(diamond.eps_r, 5.7)
        self.assertEqual(builtin_material("vacuum").eps_r, 1.0)
        for material in default_library():
            self.assertEqual(material.mu_r, 1.0)
            self.assertTrue(material.source)

    def test_unknown_material_lists_valid_names(self) -> None:
        with self.assertRaises(MaterialLookupError) as context:
            builtin_material("unobtainium")
        self.assertIn("rutile", str(context.exception))
        self.assertIsInstance(context.exception, LookupError)

    def test_invalid_records(self) -> None:
        with self.assertRaises(DomainError):
            Material(name="x", kind=DIELECTRIC, eps_r=0.5, tan_delta=0.0)
        with self.assertRaises(DomainError):
            Material(name="x", kind=DIELECTRIC, eps_r=2.0)
        with self.assertRaises(DomainError):
            Material(name="x", kind=METAL, r_surface=-1.0)
        with self.assertRaises(DomainError):
            Material(name="x", kind=METAL, r_surface=1.0, mu_r=2.0)
        with self.assertRaises(DomainError):
            builtin_material("copper").permittivity

    def test_custom_file(self) -> None:
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "materials.txt")
            with open(path, "w") as ofs:
                ofs.write("# test data\n")
                ofs.write("name kind eps_r tan_delta mu_r r_surface source\n")
                ofs.write("teflon dielectric 2.1 2e-4 1 - Test2020\n")
                ofs.write("niobium metal - - 1 1e-8 Test2020\n")
            library = MaterialLibrary.from_file(path)
        self.assertEqual(len(library), 2)
        self.assertIn("teflon", library)
        self.assertAlmostEqual(library["teflon"].tan_delta, 2e-4)
        self.assertIsNone(library["niobium"].eps_r)
        self.assertEqual(library.to_frame().shape, (2, 7))


if __name__ == "__main__":
    unittest.main()
