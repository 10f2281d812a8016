"""Physical constants shared by every module.

Values are taken from :mod:`scipy.constants` (CODATA); ``hbar`` is derived
from ``h`` so that ``h == 2 * pi * hbar`` holds exactly.
"""
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc


@dataclass(frozen=True)
class PhysicalConstants:
    mu0: float
    eps0: float
    h: float
    mu_B: float
    c: float

    @property
    def hbar(self) -> float:
        return self.h / (2 * np.pi)

    @property
    def eta0(self) -> float:
        """Impedance of free space in Ohm."""
        return float(np.sqrt(self.mu0 / self.eps0))

    def photon_energy(self, frequency: float) -> float:
        return self.h * frequency


CONSTANTS = PhysicalConstants(
    mu0=sc.mu_0,
    eps0=sc.epsilon_0,
    h=sc.h,
    mu_B=sc.physical_constants["Bohr magneton"][0],
    c=sc.c,
)

# NV ground-state parameters
G_NV = 2.0028
D_OVER_H_NV = 2.877e9
