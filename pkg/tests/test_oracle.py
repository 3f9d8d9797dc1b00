from fractions import Fraction

import numpy as np
import pytest

from opevolve.exact import GaussRational
from opevolve.opalgebra import HamiltonianSpec
from opevolve.oracle import (
    InsufficientStatesError,
    PotentialGrid,
    _split_step_reference,
    diagonalize,
    grid_hamiltonian,
    kernel_from_spectrum,
    recursive_polynomial_oracle,
    schrodinger_residual,
    split_step_evolve,
)
from opevolve.propagators import PolynomialState
from opevolve.wavefield import WaveFunction, build_grid, compare, make_gaussian


def _harmonic(grid, omega=1.0):
    return PotentialGrid.from_hamiltonian(grid, HamiltonianSpec.harmonic(omega=omega))


def test_zero_time_is_identity(grid, gaussian):
    out = split_step_evolve(gaussian, _harmonic(grid), 0.0, 10)
    assert np.max(np.abs(out.amplitudes - gaussian.amplitudes)) <= 1e-14


def test_free_gaussian_against_analytic_spreading(grid, gaussian):
    out = split_step_evolve(gaussian, PotentialGrid(grid, np.zeros(grid.n_points)), 1.0, 4096)
    assert abs(out.norm() - gaussian.norm()) <= 1e-12
    # width-1 Gaussian: psi(q, t) = pi^-1/4 (1 + i t)^-1/2 exp(-q²/(2(1 + i t)))
    s = 1 + 1j
    exact = np.pi**-0.25 / np.sqrt(s) * np.exp(-grid.q**2 / (2 * s))
    assert compare(out, WaveFunction(grid, exact)).l2_distance <= 1e-8


def test_ground_state_half_period(grid, gaussian):
    out = split_step_evolve(gaussian, _harmonic(grid), np.pi, 4096)
    assert compare(out, gaussian).fidelity >= 1 - 1e-8
    ratio = np.vdot(gaussian.amplitudes, out.amplitudes) * grid.dq
    assert abs(ratio - np.exp(-0.5j * np.pi)) <= 1e-6


def test_merged_loop_matches_literal_splitting(grid):
    psi = make_gaussian(grid, 1.0, 0.8, 1.5)
    V = PotentialGrid.from_function(grid, lambda q: 0.1 * q**4 - q**2)
    a = split_step_evolve(psi, V, 0.7, 50)
    b = _split_step_reference(psi, V, 0.7, 50, 1.0)
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) <= 1e-12


def test_second_order_convergence(grid):
    psi = make_gaussian(grid, 0.5, 1.0, 1.0)
    V = PotentialGrid.from_function(grid, lambda q: 0.05 * q**4)
    t = 1.0
    ref = split_step_evolve(psi, V, t, 64 * 4)
    e1 = compare(split_step_evolve(psi, V, t, 32), ref).l2_distance
    e2 = compare(split_step_evolve(psi, V, t, 64), ref).l2_distance
    assert 3.5 <= e1 / e2 <= 4.5


def test_grid_mismatch(gaussian):
    other = build_grid(512, -30, 30)
    with pytest.raises(ValueError):
        split_step_evolve(gaussian, PotentialGrid(other, np.zeros(512)), 1.0, 4)


def test_potential_validation(grid):
    with pytest.raises(ValueError):
        PotentialGrid(grid, np.zeros(3))
    with pytest.raises(ValueError):
        PotentialGrid(grid, np.full(grid.n_points, np.inf))


@pytest.fixture(scope="module")
def ho_spectrum():
    grid = build_grid(512, -20, 20)
    return diagonalize(_harmonic(grid))


def test_spectrum_is_orthonormal_and_ascending(ho_spectrum):
    dec = ho_spectrum
    vecs = dec.eigenvectors
    gram = vecs.T @ vecs * dec.grid.dq
    assert np.max(np.abs(gram - np.eye(dec.count))) <= 1e-8
    assert np.all(np.diff(dec.energies) > 0)
    assert np.allclose(dec.energies[:10], np.arange(10) + 0.5, atol=1e-8)
    H = grid_hamiltonian(_harmonic(dec.grid))
    resid = np.linalg.norm(H @ vecs[:, :20] - vecs[:, :20] * dec.energies[:20], axis=0) * np.sqrt(dec.grid.dq)
    assert np.max(resid) <= 1e-6


def test_spectrum_phase_convention(ho_spectrum):
    vecs = ho_spectrum.eigenvectors
    idx = np.argmax(np.abs(vecs), axis=0)
    assert np.all(vecs[idx, np.arange(vecs.shape[1])] > 0)


def test_dense_size_cap():
    with pytest.raises(ValueError):
        grid_hamiltonian(PotentialGrid(build_grid(4096, -10, 10), np.zeros(4096)))


def test_free_spectral_kernel_is_one():
    grid = build_grid(1024, -60, 60)
    kern = kernel_from_spectrum(PotentialGrid(grid, np.zeros(1024)), 0.5, plateau=(30, 15))
    assert np.max(np.abs(kern.values - 1)[kern.interior]) <= 1e-3


def test_spectral_kernel_at_time_zero(ho_spectrum):
    V = _harmonic(ho_spectrum.grid)
    kern = kernel_from_spectrum(V, 0.0, decomposition=ho_spectrum, plateau=(10, 5))
    assert kern.projection_error <= 1e-6
    assert np.max(np.abs(kern.values - 1)[kern.interior]) <= 1e-6


def test_spectral_kernel_converges_monotonically(ho_spectrum):
    from opevolve.propagators import make_kernel

    V = _harmonic(ho_spectrum.grid)
    closed = make_kernel(HamiltonianSpec.harmonic(omega=1), 0.7).evaluate(ho_spectrum.grid.q)
    errors = []
    for n in (20, 40, 80, 160, 320):
        kern = kernel_from_spectrum(V, 0.7, n, decomposition=ho_spectrum, plateau=(10, 5))
        errors.append(np.linalg.norm((kern.values - closed)[kern.interior]))
    assert all(b < a for a, b in zip(errors, errors[1:]))


def test_insufficient_states(ho_spectrum):
    V = _harmonic(ho_spectrum.grid)
    with pytest.raises(InsufficientStatesError):
        kernel_from_spectrum(V, 0.3, 5, decomposition=ho_spectrum, tol=1e-6)


def test_residual_of_free_unit_kernel(grid):
    samples = np.ones((3, grid.n_points), dtype=complex)
    assert schrodinger_residual(samples, [0.9, 1.0, 1.1], HamiltonianSpec.free(), grid) <= 1e-10


def test_residual_needs_three_samples(grid):
    with pytest.raises(ValueError):
        schrodinger_residual(np.ones((2, grid.n_points)), [0.0, 0.1], HamiltonianSpec.free(), grid)


def test_recursive_oracle_examples():
    c = GaussRational(Fraction(2, 3), 1)
    assert recursive_polynomial_oracle(0, c) == PolynomialState((1,))
    assert recursive_polynomial_oracle(3, c) == PolynomialState((0, 3 * c, 0, 1))
    assert recursive_polynomial_oracle(4, c) == PolynomialState((3 * c * c, 0, 6 * c, 0, 1))
    with pytest.raises(ValueError):
        recursive_polynomial_oracle(33, c)
