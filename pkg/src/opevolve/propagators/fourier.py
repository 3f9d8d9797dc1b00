"""Fourier-mode evolution under constant-force and harmonic potentials."""
from __future__ import annotations

import math

import numpy as np

from ..opalgebra.hamiltonians import HamiltonianSpec
from ..wavefield import WaveFunction, _leakage_flags, position_state, to_momentum, to_position
from .kernels import complex_width_denominator, harmonic_width, ho_parameters, make_kernel

# Longest harmonic step handled in one closed-form application: keeps cos(wt)
# away from its zeros so the mode sum stays well conditioned.
MAX_HARMONIC_PHASE = math.pi / 4
# Rows of the mode matrix built at once.
_CHUNK = 256


def evolve_constant_force_fourier(psi: WaveFunction, t: float, F: float, m: float = 1.0) -> WaveFunction:
    """Evolve under H = p²/2m - F q.

    Each mode A(k) picks up the free phase exp(-iħk²t/2m) and is displaced
    by F t²/2m; the result is multiplied by the kernel
    exp(-iF²t³/(6mħ)) exp(iFtq/ħ).
    """
    psi = position_state(psi)
    if t == 0:
        return psi
    grid = psi.grid
    hbar = psi.hbar
    k = grid.k
    shift = F * t**2 / (2.0 * m)
    phi = to_momentum(psi.amplitudes, grid)
    phi = phi * np.exp(-1j * hbar * k**2 * t / (2.0 * m) - 1j * k * shift)
    moved = to_position(phi, grid)
    kernel = make_kernel(HamiltonianSpec.constant_force(m=m, F=F, hbar=hbar), t)
    out = psi.with_amplitudes(kernel.evaluate(grid.q) * moved, ("constant_force_kernel_time_factor",))
    return out.with_amplitudes(out.amplitudes, _leakage_flags(out))


def harmonic_mode_sum(phi: np.ndarray, grid, t: float, omega: float, m: float, hbar: float) -> np.ndarray:
    """Sum of evolved Fourier modes for one harmonic step of length ``t``.

    A mode exp(ikq) evolves like a free Gaussian with imaginary width: with
    alpha, tau from :func:`ho_parameters`, ``k' = alpha*k``, ``q0' = q0/alpha``
    and ``z = 1 - i w alpha² tau``,

        exp(-iwt/2) z**-0.5 exp(-q²/(2 q0²)
            + (q²/(2 q0'²) + i k' q - iħ k'² tau/(2m)) / z)
    """
    alpha, tau = ho_parameters(omega, t)
    q0 = harmonic_width(m, omega, hbar)
    z = complex_width_denominator(alpha, tau, omega)
    prefactor = np.exp(-0.5j * omega * t) / np.sqrt(z)
    q = grid.q
    k = grid.k
    kprime = alpha * k
    quad = (alpha**2 / z - 1.0) / (2.0 * q0**2)
    weights = phi * np.exp(-1j * hbar * kprime**2 * tau / (2.0 * m * z)) * (grid.dk / np.sqrt(2.0 * np.pi))
    lin = 1j * kprime / z
    out = np.empty(grid.n_points, dtype=complex)
    for start in range(0, grid.n_points, _CHUNK):
        rows = q[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(np.outer(rows, lin)) @ weights
    return prefactor * np.exp(quad * q**2) * out


def evolve_harmonic_fourier(psi: WaveFunction, t: float, omega: float, m: float = 1.0) -> WaveFunction:
    """Evolve under H = p²/2m + m w² q²/2 by summing evolved Fourier modes.

    Long times are split into equal steps with |w dt| <= pi/4; each step is
    the exact closed form, so the split only keeps the mode sum away from
    the focal times where cos(wt) = 0.
    """
    psi = position_state(psi)
    if not omega > 0:
        raise ValueError("omega must be positive")
    if t == 0:
        return psi
    grid = psi.grid
    steps = max(1, math.ceil(abs(omega * t) / MAX_HARMONIC_PHASE - 1e-12))
    dt = t / steps
    amps = psi.amplitudes
    for _ in range(steps):
        phi = to_momentum(amps, grid)
        amps = harmonic_mode_sum(phi, grid, dt, omega, m, psi.hbar)
    if not np.all(np.isfinite(amps)):
        raise FloatingPointError("harmonic evolution produced non-finite amplitudes")
    out = psi.with_amplitudes(amps, ("harmonic_fourier_rederived",))
    return out.with_amplitudes(out.amplitudes, _leakage_flags(out))
