"""Dispersion relations and free evolution in momentum space."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..wavefield import WaveFunction, _leakage_flags, position_state, to_momentum, to_position


class DispersionKind(enum.Enum):
    NON_RELATIVISTIC = "nonrelativistic"
    RELATIVISTIC = "relativistic"
    MASSLESS = "massless"


@dataclass(frozen=True)
class DispersionRelation:
    kind: DispersionKind
    mass: float = 1.0
    c: float = 1.0
    include_rest_energy: bool = True

    def __post_init__(self):
        if self.kind is not DispersionKind.MASSLESS and not self.mass > 0:
            raise ValueError("mass must be positive")
        if self.kind is not DispersionKind.NON_RELATIVISTIC and not self.c > 0:
            raise ValueError("c must be positive")

    @classmethod
    def nonrelativistic(cls, m=1.0):
        return cls(DispersionKind.NON_RELATIVISTIC, mass=m)

    @classmethod
    def relativistic(cls, m=1.0, c=1.0, include_rest_energy=True):
        return cls(DispersionKind.RELATIVISTIC, mass=m, c=c, include_rest_energy=include_rest_energy)

    @classmethod
    def massless(cls, c=1.0):
        return cls(DispersionKind.MASSLESS, mass=0.0, c=c)

    def energy(self, k, hbar: float = 1.0):
        k = np.asarray(k, dtype=float)
        if self.kind is DispersionKind.NON_RELATIVISTIC:
            return (hbar * k) ** 2 / (2.0 * self.mass)
        if self.kind is DispersionKind.MASSLESS:
            return hbar * np.abs(k) * self.c
        rest = self.mass * self.c**2
        e = np.sqrt((hbar * k * self.c) ** 2 + rest**2)
        return e if self.include_rest_energy else e - rest


def group_velocity(d: DispersionRelation, k, hbar: float = 1.0):
    """dE/d(ħk), evaluated analytically."""
    k = np.asarray(k, dtype=float)
    if d.kind is DispersionKind.NON_RELATIVISTIC:
        v = hbar * k / d.mass
    elif d.kind is DispersionKind.MASSLESS:
        if np.any(k == 0):
            raise ValueError("massless group velocity has no direction at k = 0")
        v = d.c * np.sign(k)
    else:
        p = hbar * k
        v = d.c**2 * p / np.sqrt((p * d.c) ** 2 + (d.mass * d.c**2) ** 2)
    return float(v) if v.ndim == 0 else v


def evolve_free_fourier(psi: WaveFunction, t: float, d: DispersionRelation) -> WaveFunction:
    """Multiply each momentum component by exp(-i E(k) t/ħ)."""
    psi = position_state(psi)
    if t == 0:
        return psi
    grid = psi.grid
    phi = to_momentum(psi.amplitudes, grid)
    phi = phi * np.exp(-1j * d.energy(grid.k, psi.hbar) * t / psi.hbar)
    out = psi.with_amplitudes(to_position(phi, grid))
    return out.with_amplitudes(out.amplitudes, _leakage_flags(out))
