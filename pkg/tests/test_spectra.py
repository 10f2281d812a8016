import os
import tempfile
import unittest
from typing import Any, List, Optional, Tuple
from unittest.case import TestCase

import numpy as np
import pandas as pd
from nvcavity.base import DomainError
from nvcavity.spectra import (
    Peak,
    SpectroscopyParams,
    SpectrumTrace,
    default_grid,
    detuning_from_field,
    dressed_mode_frequency,
    dressed_mode_halfwidth,
    extract_peaks,
    field_sweep,
    reflection_coefficient,
    reflection_spectrum,
)
from nvcavity.spins import SpinEnsemble
from nvcavity.utils.callbacks import SweepCallback

TWO_PI = 2 * np.pi


def deep_dips(
    params: SpectroscopyParams, grid: np.ndarray, min_depth: float = 0.1
) -> List[Peak]:
    trace = reflection_spectrum(params, grid)
    return [peak for peak in extract_peaks(trace) if peak.depth > min_depth]


class TestReflection(TestCase):
    def test_critical_coupling_is_a_zero(self) -> None:
        params = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=0.0, gamma=1.0)
        s11 = reflection_coefficient(params, np.array([100.0]))
        self.assertAlmostEqual(abs(s11[0]), 0.0, places=12)
        far = reflection_spectrum(params, np.array([1e6]))
        self.assertAlmostEqual(far.s11_sq[0], 1.0, places=6)

    def test_symmetric_at_zero_detuning(self) -> None:
        params = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=100.0, gamma=1.0)
        grid = np.linspace(-500.0, 500.0, 2001) + 100.0
        s11_sq = reflection_spectrum(params, grid).s11_sq
        self.assertTrue(np.allclose(s11_sq, s11_sq[::-1], rtol=0, atol=1e-12))
        self.assertTrue(np.all(s11_sq <= 1.0 + 1e-12))

    def test_vacuum_rabi_splitting(self) -> None:
        params = SpectroscopyParams(omega_c=1000.0, kappa=1.0, g_c=100.0, gamma=1.0)
        grid = np.linspace(700.0, 1300.0, 6001)
        dips = deep_dips(params, grid)
        self.assertEqual(len(dips), 2)
        separation = dips[1].frequency - dips[0].frequency
        self.assertAlmostEqual(separation / 200.0, 1.0, delta=1e-2)
        for dip in dips:
            self.assertAlmostEqual(dip.depth, 0.75, delta=0.02)

    def test_empty_cavity_lorentzian(self) -> None:
        params = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=0.0, gamma=1.0)
        grid = np.linspace(90.0, 110.0, 4001)
        dips = deep_dips(params, grid)
        self.assertEqual(len(dips), 1)
        self.assertAlmostEqual(dips[0].frequency, 100.0, places=9)
        self.assertAlmostEqual(dips[0].depth, 1.0, places=9)
        self.assertAlmostEqual(dips[0].fwhm / 2.0, 1.0, delta=1e-3)

    def test_weak_coupling_limit(self) -> None:
        bare = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=0.0, gamma=1.0)
        weak = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=1e-6, gamma=1.0)
        grid = default_grid(bare)
        self.assertTrue(
            np.allclose(
                reflection_spectrum(weak, grid).s11_sq,
                reflection_spectrum(bare, grid).s11_sq,
                rtol=0,
                atol=1e-10,
            )
        )

    def test_under_coupled_depth(self) -> None:
        params = SpectroscopyParams(
            omega_c=100.0, kappa=1.0, g_c=0.0, gamma=1.0, alpha=0.5
        )
        s11 = reflection_coefficient(params, np.array([100.0]))
        self.assertAlmostEqual(abs(s11[0]) ** 2, 0.25, places=12)

    def test_monotone_trace_has_no_dips(self) -> None:
        params = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=0.0, gamma=1.0)
        freq = np.linspace(90.0, 110.0, 201)
        for s11_sq in (np.linspace(0.2, 1.0, 201), np.linspace(1.0, 0.2, 201)):
            trace = SpectrumTrace(freq=freq, s11_sq=s11_sq, params=params)
            self.assertEqual(extract_peaks(trace), [])

    def test_invalid_inputs(self) -> None:
        with self.assertRaises(DomainError):
            SpectroscopyParams(omega_c=100.0, kappa=0.0, g_c=1.0, gamma=1.0)
        with self.assertRaises(DomainError):
            SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=-1.0, gamma=1.0)
        params = SpectroscopyParams(omega_c=100.0, kappa=1.0, g_c=1.0, gamma=1.0)
        with self.assertRaises(DomainError):
            reflection_spectrum(params, np.array([]))
        with self.assertRaises(DomainError):
            default_grid(params, n_points=2)
        with self.assertRaises(DomainError):
            extract_peaks(reflection_spectrum(params, np.array([99.0, 100.0])))


class TestDispersion(TestCase):
    def test_extremal_pull(self) -> None:
        omega_c, g_c, gamma = 1000.0, 20.0, 2.0
        pull = g_c ** 2 / (2 * gamma)
        self.assertAlmostEqual(
            dressed_mode_frequency(omega_c, g_c, gamma, gamma), omega_c + pull
        )
        self.assertAlmostEqual(
            dressed_mode_frequency(omega_c, g_c, -gamma, gamma), omega_c - pull
        )
        deltas = np.linspace(-50.0, 50.0, 1001)
        shifts = dressed_mode_frequency(omega_c, g_c, deltas, gamma) - omega_c
        self.assertAlmostEqual(float(np.max(shifts)), pull, places=9)
        self.assertAlmostEqual(
            dressed_mode_halfwidth(1.0, g_c, 0.0, gamma), 1.0 + g_c ** 2 / gamma
        )

    def test_resonance_field_gives_bare_mode(self) -> None:
        m0 = SpinEnsemble.from_fwhm(3e6, 1e24).m0
        b_r = 0.2497e-3
        self.assertEqual(detuning_from_field(b_r, b_r, m0), 0.0)
        omega = dressed_mode_frequency(
            TWO_PI * 2.87e9, TWO_PI * 50e6, detuning_from_field(b_r, b_r, m0), 1e6
        )
        self.assertEqual(omega, TWO_PI * 2.87e9)
        # 1 mT moves the spins by about 28 MHz
        shift = detuning_from_field(b_r + 1e-3, b_r, m0) / TWO_PI
        self.assertAlmostEqual(shift / 28.03e6, 1.0, delta=1e-3)


class TestFieldSweep(TestCase):
    def setUp(self) -> None:
        self.ensemble = SpinEnsemble.from_fwhm(3e6, 1e24)
        self.params = SpectroscopyParams(
            omega_c=TWO_PI * 2.87e9,
            kappa=TWO_PI * 2.87e6,
            g_c=TWO_PI * 101.6e6,
            gamma=self.ensemble.gamma_s,
        )
        self.b_r = 0.2497e-3

    def test_single_step(self) -> None:
        dispersion, spectra = field_sweep(
            self.params, np.array([self.b_r]), self.b_r, self.ensemble.m0
        )
        self.assertEqual(len(spectra), 1)
        self.assertEqual(dispersion.b_field.shape, (1,))
        self.assertEqual(dispersion.dressed_freq[0], self.params.omega_c)
        self.assertEqual(spectra[0].freq.shape, (4001,))

    def test_splitting_at_resonance(self) -> None:
        _, spectra = field_sweep(
            self.params, np.array([self.b_r]), self.b_r, self.ensemble.m0
        )
        dips = [peak for peak in extract_peaks(spectra[0]) if peak.depth > 0.1]
        self.assertEqual(len(dips), 2)
        separation = dips[1].frequency - dips[0].frequency
        self.assertAlmostEqual(separation / (2 * self.params.g_c), 1.0, delta=1e-2)

    def test_far_detuned_dip_follows_dispersion(self) -> None:
        b_far = self.b_r + 50e-3
        dispersion, spectra = field_sweep(
            self.params, np.array([b_far]), self.b_r, self.ensemble.m0
        )
        dips = [peak for peak in extract_peaks(spectra[0]) if peak.depth > 0.5]
        self.assertEqual(len(dips), 1)
        step = spectra[0].freq[1] - spectra[0].freq[0]
        self.assertLess(abs(dips[0].frequency - dispersion.dressed_freq[0]), 2 * step)

    def test_dispersion_is_odd_about_resonance(self) -> None:
        offsets = np.linspace(1e-5, 2e-3, 20)
        b_grid = self.b_r + np.concatenate([-offsets[::-1], [0.0], offsets])
        dispersion, _ = field_sweep(
            self.params,
            b_grid,
            self.b_r,
            self.ensemble.m0,
            freq_grid=default_grid(self.params, n_points=11),
        )
        shifts = dispersion.dressed_freq - self.params.omega_c
        scale = float(np.max(np.abs(shifts)))
        self.assertEqual(shifts[20], 0.0)
        self.assertTrue(np.allclose(shifts, -shifts[::-1], rtol=0, atol=1e-9 * scale))
        widths = dispersion.dressed_halfwidth
        self.assertTrue(np.allclose(widths, widths[::-1], rtol=1e-9, atol=0))
        self.assertTrue(np.all(shifts[:20] < 0) and np.all(shifts[21:] > 0))

    def test_callback_trace(self) -> None:
        b_grid = self.b_r + np.linspace(-2e-3, 2e-3, 5)
        with tempfile.TemporaryDirectory() as temp_dir:
            trace_path = os.path.join(temp_dir, "sweep.csv")
            callback = SweepCallback(trace_path=trace_path)
            dispersion, spectra = field_sweep(
                self.params,
                b_grid,
                self.b_r,
                self.ensemble.m0,
                freq_grid=default_grid(self.params, n_points=501),
                callback=callback,
            )
            saved = pd.read_csv(trace_path)
        self.assertEqual(len(spectra), 5)
        self.assertEqual(callback.trace.shape[0], 5)
        self.assertEqual(saved.shape[0], 5)
        self.assertTrue(
            np.allclose(callback.trace["omega_rad_s"], dispersion.dressed_freq)
        )
        self.assertTrue(np.all(callback.trace["min_s11_sq"] >= 0))

    def test_callback_can_stop(self) -> None:
        def stop_after_two(i: int, *args: Any) -> Tuple[bool, Optional[str]]:
            return i >= 1, None

        dispersion, spectra = field_sweep(
            self.params,
            self.b_r + np.linspace(-1e-3, 1e-3, 6),
            self.b_r,
            self.ensemble.m0,
            freq_grid=default_grid(self.params, n_points=101),
            callback=stop_after_two,
        )
        self.assertEqual(len(spectra), 2)
        self.assertEqual(dispersion.b_field.shape, (2,))

    def test_empty_field_grid(self) -> None:
        with self.assertRaises(DomainError):
            field_sweep(self.params, np.array([]), self.b_r, self.ensemble.m0)


if __name__ == "__main__":
    unittest.main()
