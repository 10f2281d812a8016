import unittest
from unittest.case import TestCase

import numpy as np
from nvcavity.base import GeometryError, RefinementError
from nvcavity.geometry import (
    VACUUM_LABEL,
    AxisymmetricGeometry,
    CylindricalGeometry,
    ReentrantGeometry,
    Region,
    build_mesh,
    cell_volumes,
    uniform_mesh,
)
from nvcavity.materials import builtin_material


def disc(label: str, material: str, r_max: float, z_min: float, z_max: float) -> Region:
    return Region(
        r_min=0.0,
        r_max=r_max,
        z_min=z_min,
        z_max=z_max,
        material=builtin_material(material),
        label=label,
    )


class TestGeometry(TestCase):
    def setUp(self) -> None:
        self.geometry = AxisymmetricGeometry(
            outer_radius=10e-3,
            height=12e-3,
            regions=(
                disc("rutile", "rutile", 4e-3, 3e-3, 5e-3),
                disc("diamond", "diamond", 2e-3, 5e-3, 6.5e-3),
            ),
        )

    def test_invalid_dimensions(self) -> None:
        with self.assertRaises(GeometryError):
            CylindricalGeometry(radius=-0.01, height=0.1)
        with self.assertRaises(GeometryError):
            ReentrantGeometry(
                cavity_radius=10e-3, cavity_height=5e-3, post_radius=12e-3, gap=5e-5
            )
        with self.assertRaises(GeometryError):
            CylindricalGeometry(
                radius=0.07, height=0.1, wall_material=builtin_material("diamond")
            )

    def test_region_layout(self) -> None:
        with self.assertRaises(GeometryError):
            AxisymmetricGeometry(
                outer_radius=10e-3,
                height=12e-3,
                regions=(
                    disc("a", "rutile", 4e-3, 3e-3, 5e-3),
                    disc("b", "diamond", 2e-3, 4e-3, 6e-3),
                ),
            )
        with self.assertRaises(GeometryError):
            AxisymmetricGeometry(
                outer_radius=3e-3,
                height=12e-3,
                regions=(disc("a", "rutile", 4e-3, 3e-3, 5e-3),),
            )
        with self.assertRaises(GeometryError):
            AxisymmetricGeometry(
                outer_radius=10e-3,
                height=12e-3,
                regions=(
                    disc("a", "rutile", 4e-3, 3e-3, 5e-3),
                    disc("a", "diamond", 2e-3, 6e-3, 7e-3),
                ),
            )

    def test_labels(self) -> None:
        self.assertEqual(self.geometry.labels, [VACUUM_LABEL, "rutile", "diamond"])
        self.assertAlmostEqual(
            self.geometry.label_volume("diamond"), np.pi * 4e-6 * 1.5e-3
        )
        self.assertEqual(self.geometry.material_of("diamond").name, "diamond")

    def test_mesh_aligns_with_regions(self) -> None:
        mesh = build_mesh(self.geometry, 5e-4)
        for value in (2e-3, 4e-3):
            self.assertTrue(np.any(np.isclose(mesh.r_nodes, value, rtol=0, atol=1e-15)))
        for value in (3e-3, 5e-3, 6.5e-3):
            self.assertTrue(np.any(np.isclose(mesh.z_nodes, value, rtol=0, atol=1e-15)))
        self.assertTrue(np.all(mesh.dr <= 5e-4 * (1 + 1e-9)))
        self.assertTrue(np.all(mesh.dz <= 5e-4 * (1 + 1e-9)))

        volumes = cell_volumes(mesh)
        self.assertAlmostEqual(
            volumes.sum() / (np.pi * 10e-3 ** 2 * 12e-3), 1.0, places=12
        )
        for label in ("rutile", "diamond"):
            self.assertAlmostEqual(
                volumes[mesh.label_mask(label)].sum()
                / self.geometry.label_volume(label),
                1.0,
                places=10,
            )
        eps = mesh.eps_r
        self.assertEqual(eps[mesh.label_mask("rutile")].min(), 187.0)
        self.assertEqual(eps[mesh.label_mask(VACUUM_LABEL)].max(), 1.0)

    def test_mesh_is_deterministic(self) -> None:
        first = build_mesh(self.geometry, 5e-4)
        second = build_mesh(self.geometry, 5e-4)
        for name in ("r_nodes", "z_nodes", "cell_material", "cell_label"):
            self.assertTrue(
                np.array_equal(getattr(first, name), getattr(second, name)), name
            )
        self.assertEqual(first.materials, second.materials)
        self.assertEqual(first.labels, second.labels)

    def test_volume_partition_on_random_regions(self) -> None:
        rng = np.random.RandomState(42)
        label_material = {"a": "rutile", "b": "diamond", "c": "sapphire"}
        outer_radius, height = 10e-3, 12e-3
        for _ in range(20):
            n_slabs = rng.randint(1, 5)
            widths = rng.uniform(1.0, 2.0, size=n_slabs)
            z_edges = height * np.concatenate([[0.0], np.cumsum(widths)]) / (
                widths.sum() * rng.uniform(1.0, 1.5)
            )
            regions = []
            for z_min, z_max in zip(z_edges[:-1], z_edges[1:]):
                label = sorted(label_material)[rng.randint(3)]
                r_min = rng.uniform(0.0, 0.3) * outer_radius
                regions.append(
                    Region(
                        r_min=r_min,
                        r_max=r_min + rng.uniform(0.3, 0.7) * outer_radius,
                        z_min=z_min,
                        z_max=z_max,
                        material=builtin_material(label_material[label]),
                        label=label,
                    )
                )
            geometry = AxisymmetricGeometry(
                outer_radius=outer_radius, height=height, regions=tuple(regions)
            )
            target_cell = 0.5 * min(region.thickness for region in regions)
            mesh = build_mesh(geometry, target_cell)
            volumes = cell_volumes(mesh)
            total = np.pi * outer_radius ** 2 * height
            self.assertAlmostEqual(volumes.sum() / total, 1.0, places=12)
            filled = 0.0
            for label in geometry.labels[1:]:
                expected = geometry.label_volume(label)
                self.assertAlmostEqual(
                    volumes[mesh.label_mask(label)].sum() / expected, 1.0, places=10
                )
                filled += expected
            vacuum = volumes[mesh.label_mask(VACUUM_LABEL)].sum()
            self.assertAlmostEqual((vacuum + filled) / total, 1.0, places=10)

    def test_refinement_doubles_cells(self) -> None:
        coarse = build_mesh(self.geometry, 5e-4)
        fine = build_mesh(self.geometry, 2.5e-4)
        self.assertEqual(fine.n_r, 2 * coarse.n_r)
        self.assertEqual(fine.n_z, 2 * coarse.n_z)

    def test_refinement_error_names_region(self) -> None:
        with self.assertRaises(RefinementError) as context:
            build_mesh(self.geometry, 1.8e-3)
        self.assertEqual(context.exception.region_label, "diamond")

    def test_uniform_mesh(self) -> None:
        mesh = uniform_mesh(0.07, 0.1, 7, 10)
        self.assertEqual(mesh.shape, (7, 10))
        self.assertEqual(mesh.labels, (VACUUM_LABEL,))
        self.assertEqual(mesh.present_labels(), [VACUUM_LABEL])
        self.assertTrue(mesh.wall_material.is_metal)

    def test_wall_tuning_moves_flush_regions(self) -> None:
        geometry = AxisymmetricGeometry(
            outer_radius=5e-3,
            height=10e-3,
            regions=(
                Region(
                    r_min=2e-3,
                    r_max=5e-3,
                    z_min=0.0,
                    z_max=10e-3,
                    material=builtin_material("sapphire"),
                    label="sleeve",
                ),
                disc("diamond", "diamond", 1e-3, 4e-3, 6e-3),
            ),
        )
        wider = geometry.with_outer_radius(6e-3)
        self.assertEqual(wider.regions[0].r_max, 6e-3)
        self.assertEqual(wider.regions[1].r_max, 1e-3)
        taller = geometry.with_height(11e-3)
        self.assertEqual(taller.regions[0].z_max, 11e-3)
        self.assertEqual(taller.regions[1].z_max, 6e-3)
        with self.assertRaises(GeometryError):
            geometry.with_outer_radius(1.5e-3)


if __name__ == "__main__":
    unittest.main()
