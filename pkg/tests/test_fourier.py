import numpy as np
import pytest

from opevolve.opalgebra import HamiltonianSpec
from opevolve.oracle import PotentialGrid, split_step_evolve
from opevolve.propagators import (
    DispersionRelation,
    evolve_constant_force_fourier,
    evolve_free_fourier,
    evolve_harmonic_fourier,
)
from opevolve.wavefield import build_grid, compare, make_gaussian, observables


def _oracle(psi, H, t, steps=4096):
    V = PotentialGrid.from_hamiltonian(psi.grid, H)
    return split_step_evolve(psi, V, t, steps, float(H.mass))


def test_zero_force_equals_free(gaussian):
    a = evolve_constant_force_fourier(gaussian, 1.4, 0.0)
    b = evolve_free_fourier(gaussian, 1.4, DispersionRelation.nonrelativistic())
    assert np.max(np.abs(a.amplitudes - b.amplitudes)) <= 1e-12


def test_ehrenfest_shifts_under_constant_force(gaussian):
    F, m, t = 1.0, 1.0, 1.0
    forced = observables(evolve_constant_force_fourier(gaussian, t, F, m))
    free = observables(evolve_free_fourier(gaussian, t, DispersionRelation.nonrelativistic(m)))
    assert abs(forced.mean_q - free.mean_q - F * t**2 / (2 * m)) <= 1e-6
    assert abs(forced.mean_p - free.mean_p - F * t) <= 1e-6


def test_constant_force_matches_oracle(gaussian):
    out = evolve_constant_force_fourier(gaussian, 0.5, 2.0, 1.0)
    ref = _oracle(gaussian, HamiltonianSpec.constant_force(m=1, F=2), 0.5)
    assert compare(out, ref).l2_distance <= 1e-6


def test_harmonic_matches_oracle_through_focal_time(gaussian):
    H = HamiltonianSpec.harmonic(omega=1)
    for t in (0.4, np.pi / 2, 2.3):
        out = evolve_harmonic_fourier(gaussian, t, 1.0)
        assert np.all(np.isfinite(out.amplitudes))
        assert compare(out, _oracle(gaussian, H, t)).l2_distance <= 1e-6


@pytest.fixture(scope="module")
def coherent(grid):
    # width sqrt(ħ/(m w)) = 1 for m = w = 1
    return make_gaussian(grid, 2.0, 1.0, 0.0)


def test_harmonic_revival(coherent):
    out = evolve_harmonic_fourier(coherent, 2 * np.pi, 1.0)
    assert compare(out, coherent).fidelity >= 1 - 1e-6


def test_harmonic_half_period_reflection(coherent):
    out = evolve_harmonic_fourier(coherent, np.pi, 1.0)
    assert abs(observables(out).mean_q + 2.0) <= 1e-6


def test_coherent_center_follows_cosine(coherent):
    for t in np.linspace(0, 2 * np.pi, 9):
        mean = observables(evolve_harmonic_fourier(coherent, t, 1.0)).mean_q
        assert abs(mean - 2.0 * np.cos(t)) <= 1e-6


def test_ground_state_modulus_is_stationary(grid):
    ground = make_gaussian(grid, 0.0, 1.0, 0.0)
    for t in (0.3, 1.0, 4.0):
        out = evolve_harmonic_fourier(ground, t, 1.0)
        assert np.max(np.abs(np.abs(out.amplitudes) - np.abs(ground.amplitudes))) <= 1e-8


@pytest.mark.parametrize("evolve", [
    lambda psi, t: evolve_free_fourier(psi, t, DispersionRelation.nonrelativistic()),
    lambda psi, t: evolve_free_fourier(psi, t, DispersionRelation.relativistic()),
    lambda psi, t: evolve_constant_force_fourier(psi, t, 0.8),
    lambda psi, t: evolve_harmonic_fourier(psi, t, 1.0),
], ids=["free", "relativistic", "constant_force", "harmonic"])
def test_composition_and_unitarity(evolve):
    grid = build_grid(1024, -40, 40)
    psi = make_gaussian(grid, -1.0, 1.2, 0.5)
    two_step = evolve(evolve(psi, 0.6), 0.9)
    one_step = evolve(psi, 1.5)
    assert compare(two_step, one_step).l2_distance <= 1e-8
    assert abs(one_step.norm() - psi.norm()) <= 1e-10
