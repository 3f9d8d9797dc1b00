import numpy as np
import pytest

from opevolve.oracle import PotentialGrid, split_step_evolve
from opevolve.propagators import DispersionRelation, evolve_free_fourier, group_velocity
from opevolve.wavefield import WaveFunction, build_grid, compare, make_gaussian, to_momentum, to_position


def test_energy_even_and_zero_point():
    k = np.linspace(-4, 4, 17)
    for d in (DispersionRelation.nonrelativistic(2.0), DispersionRelation.relativistic(1.5, 2.0),
              DispersionRelation.massless(3.0)):
        assert np.allclose(d.energy(k), d.energy(-k), rtol=0, atol=0)
    assert DispersionRelation.nonrelativistic().energy(0.0) == 0
    assert DispersionRelation.massless().energy(0.0) == 0
    assert DispersionRelation.relativistic(2.0, 3.0).energy(0.0) == pytest.approx(18.0)


def test_group_velocity_examples():
    assert group_velocity(DispersionRelation.nonrelativistic(1.0), 2.0) == 2.0
    assert group_velocity(DispersionRelation.massless(1.0), -3.0) == -1.0
    assert abs(group_velocity(DispersionRelation.relativistic(1.0, 1.0), 1.0) - 2**-0.5) < 1e-12


@pytest.mark.parametrize("d", [DispersionRelation.nonrelativistic(0.7),
                               DispersionRelation.relativistic(1.3, 2.0)])
def test_group_velocity_matches_finite_difference(d):
    k, h = 0.9, 1e-5
    fd = (d.energy(k + h) - d.energy(k - h)) / (2 * h)
    assert abs(group_velocity(d, k) - fd) < 1e-8


def test_massless_velocity_undefined_at_rest():
    with pytest.raises(ValueError):
        group_velocity(DispersionRelation.massless(), 0.0)


def test_zero_time_is_identity(gaussian):
    out = evolve_free_fourier(gaussian, 0.0, DispersionRelation.nonrelativistic())
    assert np.max(np.abs(out.amplitudes - gaussian.amplitudes)) < 1e-14


def test_free_gaussian_matches_split_step(grid, gaussian):
    out = evolve_free_fourier(gaussian, 1.0, DispersionRelation.nonrelativistic())
    ref = split_step_evolve(gaussian, PotentialGrid(grid, np.zeros(grid.n_points)), 1.0, 4096)
    assert compare(out, ref).l2_distance <= 1e-8


def test_rest_energy_is_a_global_phase(gaussian):
    with_rest = evolve_free_fourier(gaussian, 1.3, DispersionRelation.relativistic(1.0, 2.0, True))
    without = evolve_free_fourier(gaussian, 1.3, DispersionRelation.relativistic(1.0, 2.0, False))
    r = compare(with_rest, without)
    assert r.fidelity > 1 - 1e-12
    ratio = with_rest.amplitudes[512] / without.amplitudes[512]
    assert abs(ratio - np.exp(-1j * 2.0**2 * 1.3)) < 1e-12


def _one_sided_packet(grid, center, width, k0):
    psi = make_gaussian(grid, center, width, k0)
    phi = np.where(grid.k > 0, to_momentum(psi.amplitudes, grid), 0)
    return psi.with_amplitudes(to_position(phi, grid)).normalized()


def test_massless_one_sided_packet_translates_rigidly():
    # dq = 1/32, so the shift c*t = 2 is a whole number of samples
    grid = build_grid(2048, -32, 32)
    psi = _one_sided_packet(grid, -5.0, 2.0, 5.0)
    out = evolve_free_fourier(psi, 2.0, DispersionRelation.massless(1.0))
    shifted = WaveFunction(grid, np.roll(psi.amplitudes, round(2.0 / grid.dq)))
    assert compare(out, shifted).fidelity >= 1 - 1e-8


def test_unitarity(gaussian):
    for d in (DispersionRelation.nonrelativistic(), DispersionRelation.relativistic(),
              DispersionRelation.massless()):
        out = evolve_free_fourier(gaussian, 1.7, d)
        assert abs(out.norm() - gaussian.norm()) < 1e-10
