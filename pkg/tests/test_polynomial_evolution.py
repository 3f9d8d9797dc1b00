from fractions import Fraction

import numpy as np
import pytest

from opevolve.exact import GaussRational
from opevolve.opalgebra import HamiltonianSpec
from opevolve.oracle import PotentialGrid, recursive_polynomial_oracle, split_step_evolve
from opevolve.propagators import (
    DispersionRelation,
    PolynomialState,
    TruncationError,
    evolve_constant_force_fourier,
    evolve_free_fourier,
    evolve_harmonic_fourier,
    evolve_polynomial_state,
    free_polynomial,
    free_polynomial_coefficients,
    harmonic_polynomial_resummed,
    make_kernel,
)
from opevolve.propagators.polynomial import dispersion_constant
from opevolve.wavefield import WaveFunction, build_grid, smooth_plateau

I = GaussRational(0, 1)


def test_free_polynomial_examples():
    t = Fraction(3, 7)
    it = I * t
    assert free_polynomial(1, t) == PolynomialState((0, 1))
    assert free_polynomial(2, t) == PolynomialState((it, 0, 1))
    assert free_polynomial(4, t) == PolynomialState((3 * it * it, 0, 6 * it, 0, 1))


@pytest.mark.parametrize("n", range(13))
def test_free_polynomial_equals_recursive_oracle(n):
    t = Fraction(5, 3)
    c = dispersion_constant(t, Fraction(2), Fraction(1))
    assert free_polynomial(n, t, m=2) == recursive_polynomial_oracle(n, c)


def test_closed_form_coefficients_match_ratio_recurrence():
    c = GaussRational(Fraction(1, 2), Fraction(-3, 4))
    for n in range(20):
        assert PolynomialState(free_polynomial_coefficients(n, c)) == recursive_polynomial_oracle(n, c)


def test_unit_state_under_constant_force_is_kernel():
    H = HamiltonianSpec.constant_force(m=1, F=1)
    ev = evolve_polynomial_state(PolynomialState((1,)), H, 0.8)
    q = np.linspace(-5, 5, 41)
    assert np.max(np.abs(ev.evaluate(q) - make_kernel(H, 0.8).evaluate(q))) < 1e-14


def test_linear_state_free_is_unchanged():
    ev = evolve_polynomial_state(PolynomialState((0, 1)), HamiltonianSpec.free(), Fraction(2))
    assert ev.poly == PolynomialState((0, 1))


def test_linear_state_under_constant_force_shifts():
    t = Fraction(3, 2)
    ev = evolve_polynomial_state(PolynomialState((0, 1)), HamiltonianSpec.constant_force(m=1, F=1), t)
    assert ev.poly == PolynomialState((-t**2 / 2, 1))


def test_harmonic_series_agrees_with_resummed_form():
    H = HamiltonianSpec.harmonic(omega=1)
    p = PolynomialState((1, 0.5, -0.2, 0.05))
    q = np.linspace(-3, 3, 121)
    for t in (0.3, 0.7):
        series = evolve_polynomial_state(p, H, t, window=(-3, 3), tol=1e-10)
        exact = harmonic_polynomial_resummed(p, H, t)
        assert np.max(np.abs(series.evaluate(q) - exact.evaluate(q))) <= 1e-9
        assert series.truncation_bound + series.roundoff_bound < 1e-10


def test_harmonic_series_refuses_unreachable_tolerance():
    # near wt = pi/2 the individual terms cancel far below double precision
    with pytest.raises(TruncationError):
        evolve_polynomial_state(PolynomialState((1,)), HamiltonianSpec.harmonic(omega=1), 1.0,
                                window=(-3, 3), tol=1e-10)


def test_harmonic_series_with_fixed_term_count():
    H = HamiltonianSpec.harmonic(omega=1)
    ev = evolve_polynomial_state(PolynomialState((1,)), H, 0.3, window=(-2, 2), k_max=5)
    assert ev.terms_used == 6


def test_windowed_evaluation():
    ev = evolve_polynomial_state(PolynomialState((1,)), HamiltonianSpec.harmonic(omega=1), 0.3,
                                 window=(-2, 2))
    with pytest.raises(ValueError):
        ev.evaluate(np.array([3.0]))
    values, flags = ev.evaluate_windowed(np.array([0.0, 3.0]))
    assert values[1] == 0 and flags == ("outside_window_zeroed",)


def test_resummed_unit_state_is_the_kernel():
    H = HamiltonianSpec.harmonic(omega=1.5)
    q = np.linspace(-6, 6, 49)
    for t in (0.2, 1.3, 2.9):
        ev = harmonic_polynomial_resummed(PolynomialState((1,)), H, t)
        assert np.max(np.abs(ev.evaluate(q) - make_kernel(H, t).evaluate(q))) < 1e-12


def test_inverted_oscillator_not_supported():
    with pytest.raises(ValueError):
        evolve_polynomial_state(PolynomialState((1,)), HamiltonianSpec.inverted_harmonic(lam=1), 0.5)


# The three-way web runs on a cubic cut off smoothly far away (|q| > 40) and is
# compared on |q| <= 3, well inside the region the cutoff cannot reach by t.
WEB = PolynomialState((1, 0.5, -0.2, 0.05))


@pytest.fixture(scope="module")
def web_grid():
    return build_grid(4096, -80, 80)


@pytest.fixture(scope="module")
def web_state(web_grid):
    return WaveFunction(web_grid, WEB.evaluate(web_grid.q) * smooth_plateau(web_grid.q, 40, 20))


def _rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


@pytest.mark.parametrize("name,H,fourier,times", [
    ("free", HamiltonianSpec.free(),
     lambda psi, t: evolve_free_fourier(psi, t, DispersionRelation.nonrelativistic()), (0.3, 1.0)),
    ("constant_force", HamiltonianSpec.constant_force(m=1, F=1),
     lambda psi, t: evolve_constant_force_fourier(psi, t, 1.0), (0.3, 1.0)),
    ("harmonic", HamiltonianSpec.harmonic(omega=1),
     lambda psi, t: evolve_harmonic_fourier(psi, t, 1.0), (0.3, 0.7)),
])
def test_consistency_web(name, H, fourier, times, web_grid, web_state):
    mask = np.abs(web_grid.q) <= 3
    V = PotentialGrid.from_hamiltonian(web_grid, H)
    for t in times:
        a = evolve_polynomial_state(WEB, H, t, window=(-3, 3)).evaluate(web_grid.q[mask])
        b = fourier(web_state, t).amplitudes[mask]
        c = split_step_evolve(web_state, V, t, 4096).amplitudes[mask]
        assert _rel(a, b) <= 1e-6
        assert _rel(a, c) <= 1e-6
        assert _rel(b, c) <= 1e-6
