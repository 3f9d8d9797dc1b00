"""Independent reference computations.

Nothing here uses the closed forms in :mod:`opevolve.propagators`: the
split-step integrator and the dense eigenbasis only know the grid
Hamiltonian, and the polynomial oracle applies ``q + c d/dq`` by brute force.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exact import GaussRational
from .opalgebra.actions import apply_operator_polynomial
from .opalgebra.hamiltonians import HamiltonianSpec
from .propagators.polynomial import PolynomialState, _num
from .wavefield import (
    Grid1D,
    Representation,
    WaveFunction,
    momentum_multiply,
    position_state,
    smooth_plateau,
)

MAX_DENSE_POINTS = 2048


@dataclass(frozen=True, eq=False)
class PotentialGrid:
    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise ValueError("potential length does not match the grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("potential values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid1D, fn) -> PotentialGrid:
        return cls(grid, fn(grid.q))

    @classmethod
    def from_hamiltonian(cls, grid: Grid1D, H: HamiltonianSpec) -> PotentialGrid:
        return cls(grid, H.potential(grid.q))


def split_step_evolve(psi: WaveFunction, V: PotentialGrid, t: float, steps: int,
                      m: float = 1.0) -> WaveFunction:
    """Strang splitting: half kinetic, full potential, half kinetic per step."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    psi = position_state(psi)
    if psi.grid != V.grid:
        raise ValueError("state and potential live on different grids")
    if t == 0:
        return psi
    grid = psi.grid
    hbar = psi.hbar
    dt = t / steps
    half_kinetic = np.fft.ifftshift(np.exp(-1j * hbar * grid.k**2 * dt / (4.0 * m)))
    potential = np.exp(-1j * V.values * dt / hbar)
    amps = np.fft.fft(psi.amplitudes)
    for _ in range(steps):
        amps = np.fft.fft(potential * np.fft.ifft(half_kinetic * amps))
        amps = half_kinetic * amps
    # the two adjacent half-kinetic factors merged: apply the trailing half once
    return psi.with_amplitudes(np.fft.ifft(amps))


def _split_step_reference(psi, V, t, steps, m):
    # literal half/full/half sequence, kept for tests of the merged loop
    grid = psi.grid
    hbar = psi.hbar
    dt = t / steps
    half = np.exp(-1j * hbar * grid.k**2 * dt / (4.0 * m))
    pot = np.exp(-1j * V.values * dt / hbar)
    amps = psi.amplitudes
    for _ in range(steps):
        amps = momentum_multiply(amps, grid, half)
        amps = pot * amps
        amps = momentum_multiply(amps, grid, half)
    return psi.with_amplitudes(amps)


def grid_hamiltonian(V: PotentialGrid, m: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    """Dense real-symmetric matrix of p²/2m + V on the periodic grid."""
    grid = V.grid
    n = grid.n_points
    if n > MAX_DENSE_POINTS:
        raise ValueError(f"dense diagonalization is capped at {MAX_DENSE_POINTS} points")
    k = 2 * np.pi * np.fft.fftfreq(n, grid.dq)
    column = np.fft.ifft((hbar * k) ** 2 / (2.0 * m)).real
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return column[idx] + np.diag(V.values)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenpairs of the grid Hamiltonian, ascending in energy.

    Eigenvectors are columns normalized so that sum |phi|² dq = 1, with the
    largest-magnitude component of each made real and positive.
    """

    grid: Grid1D
    energies: np.ndarray
    eigenvectors: np.ndarray
    hbar: float = 1.0

    @property
    def count(self) -> int:
        return len(self.energies)


def diagonalize(V: PotentialGrid, m: float = 1.0, hbar: float = 1.0,
                check: bool = True) -> SpectralDecomposition:
    H = grid_hamiltonian(V, m, hbar)
    energies, vecs = scipy.linalg.eigh(H)
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    vecs = vecs * signs
    dq = V.grid.dq
    if check:
        gram = vecs.T @ vecs
        if np.max(np.abs(gram - np.eye(len(energies)))) > 1e-8:
            raise ArithmeticError("eigenvectors are not orthonormal")
        resid = np.linalg.norm(H @ vecs - vecs * energies, axis=0)
        if np.max(resid) > 1e-6 * max(1.0, np.max(np.abs(energies))):
            raise ArithmeticError("eigenpair residual too large")
    return SpectralDecomposition(V.grid, energies, vecs / np.sqrt(dq), hbar)


@dataclass(frozen=True, eq=False)
class SpectralKernel:
    """Kernel built from retained eigenstates, valid on ``interior``."""

    grid: Grid1D
    values: np.ndarray
    interior: np.ndarray
    retained: int
    projection_error: float


class InsufficientStatesError(ArithmeticError):
    pass


def kernel_from_spectrum(V: PotentialGrid, t: float, retained: int | None = None, *,
                         m: float = 1.0, hbar: float = 1.0,
                         plateau: tuple = (14.0, 8.0), interior: float = 3.0,
                         tol: float | None = None,
                         decomposition: SpectralDecomposition | None = None) -> SpectralKernel:
    """K(q, t) = sum_n exp(-i E_n t/ħ) phi_n(q) <phi_n | W>.

    The unit function is replaced by a smooth plateau ``W`` (flat for
    |q| <= plateau[0], zero beyond plateau[0] + plateau[1]); only
    ``|q| <= interior`` is meaningful. ``projection_error`` is the relative
    L2 error of expanding ``W`` in the retained states on the interior; when
    it exceeds ``tol`` an ``InsufficientStatesError`` is raised.
    """
    dec = decomposition if decomposition is not None else diagonalize(V, m, hbar)
    grid = V.grid
    n = dec.count if retained is None else int(retained)
    if not 1 <= n <= dec.count:
        raise ValueError(f"retained must be in [1, {dec.count}]")
    q = grid.q
    W = smooth_plateau(q, *plateau)
    phis = dec.eigenvectors[:, :n]
    overlaps = phis.T @ W * grid.dq
    mask = np.abs(q) <= interior
    recon = phis @ overlaps
    err = float(np.linalg.norm((recon - W)[mask]) / np.linalg.norm(W[mask]))
    if tol is not None and err > tol:
        raise InsufficientStatesError(
            f"{n} retained states reproduce the unit function only to {err:.3g} (> {tol:g})"
        )
    values = phis @ (np.exp(-1j * dec.energies[:n] * t / hbar) * overlaps)
    return SpectralKernel(grid, values, mask, n, err)


def _tapered(values: np.ndarray, grid: Grid1D, interior: float) -> np.ndarray:
    # a gentle roll-off keeps spectral derivatives from aliasing into the interior
    q = grid.q
    half = 0.5 * grid.length
    gap = half - interior
    return values * smooth_plateau(q - (grid.q_min + half), interior + 0.1 * gap, 0.8 * gap)


def schrodinger_residual(samples, times, H: HamiltonianSpec, grid: Grid1D,
                         interior: float | None = None) -> float:
    """Relative residual ||iħ dK/dt - H K|| / ||K|| at the middle sample.

    ``samples`` has shape ``(n_times, n_points)`` on equally spaced ``times``.
    With 3 samples the time derivative is the central difference; with 5 it
    uses the fourth-order stencil. Spatial derivatives are spectral, taken on
    a copy tapered smoothly to zero outside the interior, and the norm is
    restricted to ``|q - center| <= interior`` where the taper is flat.
    """
    samples = np.asarray(samples, dtype=complex)
    times = np.asarray(times, dtype=float)
    if samples.ndim != 2 or samples.shape[0] < 3:
        raise ValueError("need the kernel at three or more times")
    if samples.shape[0] != len(times):
        raise ValueError("one time per sample row is required")
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise ValueError("sample times must be equally spaced")
    dt = steps[0]
    hbar = H.hbar
    if interior is None:
        interior = 0.25 * grid.length
    mid = samples.shape[0] // 2
    if samples.shape[0] >= 5:
        d = (-samples[mid + 2] + 8 * samples[mid + 1] - 8 * samples[mid - 1] + samples[mid - 2]) / (12 * dt)
    else:
        d = (samples[mid + 1] - samples[mid - 1]) / (2 * dt)
    K = samples[mid]
    center = grid.q_min + 0.5 * grid.length
    mask = np.abs(grid.q - center) <= interior
    tapered = WaveFunction(grid, _tapered(K, grid, interior), Representation.POSITION, hbar)
    HK = apply_operator_polynomial(H.operator(), tapered).amplitudes
    resid = 1j * hbar * d - HK
    return float(np.linalg.norm(resid[mask]) / np.linalg.norm(K[mask]))


def kernel_residual(kernel_at, t: float, H: HamiltonianSpec, grid: Grid1D, dt: float = 1e-4,
                    richardson: bool = False, interior: float | None = None) -> float:
    """Residual of a kernel given as ``kernel_at(t) -> values on grid``."""
    offsets = (-2, -1, 0, 1, 2) if richardson else (-1, 0, 1)
    times = [t + j * dt for j in offsets]
    samples = np.array([kernel_at(s) for s in times])
    return schrodinger_residual(samples, times, H, grid, interior)


def recursive_polynomial_oracle(n: int, c) -> PolynomialState:
    """(q + c d/dq)**n applied to 1, one factor at a time."""
    if not 0 <= n <= 32:
        raise ValueError("n must be in [0, 32]")
    c = _num(c)
    coeffs = [GaussRational(1)]
    for _ in range(n):
        nxt = [GaussRational(0)] * (len(coeffs) + 1)
        for j, a in enumerate(coeffs):
            nxt[j + 1] = nxt[j + 1] + a
            if j:
                nxt[j - 1] = nxt[j - 1] + a * c * j
        coeffs = nxt
    return PolynomialState(tuple(coeffs))
