"""Truncated operator-series propagation.

The evolved state is ``psi(Q̂) K_N`` where ``Q̂ = q̂(-t)`` is the truncated
Heisenberg series of the position operator at negative time and
``K_N = sum_n (-i t H/ħ)**n / n! applied to 1`` is the truncated kernel.
Because every momentum factor in ``K_N`` acts on 1 or on a polynomial,
``K_N`` is itself a polynomial in q.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exact import GaussRational, to_fraction
from ..opalgebra.hamiltonians import HamiltonianSpec
from ..opalgebra.heisenberg import heisenberg_series
from ..opalgebra.polynomial import DEFAULT_MAX_DEGREE, OperatorPolynomial
from ..wavefield import Grid1D, Representation, WaveFunction, _leakage_flags, position_state, to_momentum
from .polynomial import PolynomialState, _is_exact, _num

# A kernel-series term larger than this multiple of the largest earlier
# term (on the evaluation window) marks the truncation as divergent.
DIVERGENCE_GROWTH = 1.0
_CHUNK = 256


def act_on_polynomial(op: OperatorPolynomial, f: PolynomialState, hbar) -> PolynomialState:
    """Apply a normal-ordered operator to a polynomial: q^a p^b f = q^a (-iħ)^b f^(b)."""
    coeffs = op.substitute_hbar(hbar)
    n_out = 1
    for (a, b) in coeffs:
        n_out = max(n_out, len(f.coefficients) - b + a)
    out = [GaussRational(0)] * n_out
    minus_i = GaussRational(0, -1)
    for (a, b), c in coeffs.items():
        d = f.derivative(b) if b else f
        scale = _num(c) * (minus_i**b)
        for j, v in enumerate(d.coefficients):
            out[j + a] = out[j + a] + v * scale
    return PolynomialState(tuple(out), f.hbar, f.m)


def kernel_series_terms(H: HamiltonianSpec, t, order: int, hbar) -> list:
    """Terms ``(-i t/ħ)**n / n! H**n 1`` for n = 0..order, as polynomials."""
    Hop = H.operator()
    factor = GaussRational(0, -1) * _num(t) / _num(hbar)
    current = PolynomialState((GaussRational(1),), float(hbar))
    terms = [current]
    for n in range(1, order + 1):
        current = act_on_polynomial(Hop, current, hbar).scale(factor / n)
        terms.append(current)
    return terms


@dataclass(frozen=True)
class SeriesResult:
    """Polynomial outcome of the operator series with diagnostics."""

    poly: PolynomialState
    kernel: PolynomialState
    position: OperatorPolynomial
    order: int
    flags: tuple = field(default=())


def _sum(polys) -> PolynomialState:
    total = PolynomialState((GaussRational(0),))
    for p in polys:
        total = total + p
    return total


def _divergence_flags(terms, window) -> tuple:
    xs = np.linspace(window[0], window[1], 101)
    sizes = [float(np.max(np.abs(p.evaluate(xs)))) if p.coefficients else 0.0 for p in terms]
    if len(sizes) >= 3 and sizes[-1] > DIVERGENCE_GROWTH * max(sizes[:-1]):
        return ("series_divergence",)
    return ()


def operator_series_polynomial(p: PolynomialState, H: HamiltonianSpec, t, order: int, *,
                               max_degree: int = DEFAULT_MAX_DEGREE,
                               window: tuple = (-4.0, 4.0)) -> SeriesResult:
    """Evolve a polynomial state by the truncated operator series.

    Exact when ``t`` and ħ are exact (int or Fraction). For Free and
    ConstantForce the position series terminates, so ``order`` at or above
    the termination index reproduces the closed form up to the kernel
    truncation.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    hbar = to_fraction(p.hbar)
    t = t if _is_exact(t) else float(t)
    series = heisenberg_series(OperatorPolynomial.q(), H, order, max_degree=max_degree)
    Q = series.at(-t)
    kernel_terms = kernel_series_terms(H, t, order, hbar)
    kernel = _sum(kernel_terms)
    # psi(Q) = sum c_n Q^n, composed symbolically in normal order
    out = PolynomialState((GaussRational(0),), p.hbar, p.m)
    power = OperatorPolynomial(OperatorPolynomial.constant(1).terms, max_degree)
    for n, c in enumerate(p.coefficients):
        if n:
            power = power * Q
        if c != 0:
            out = out + act_on_polynomial(power, kernel, hbar).scale(c)
    flags = _divergence_flags(kernel_terms, window)
    return SeriesResult(out, kernel, Q, order, flags)


def _linear_parts(Q: OperatorPolynomial, hbar: float) -> tuple[complex, complex, complex]:
    coeffs = Q.substitute_hbar(hbar)
    extra = [key for key in coeffs if key not in ((0, 0), (1, 0), (0, 1))]
    if extra:
        raise ValueError("position series is not linear in q and p")
    return (complex(coeffs.get((0, 0), 0)), complex(coeffs.get((1, 0), 0)),
            complex(coeffs.get((0, 1), 0)))


def _evaluate_shifted(f: PolynomialState, points: np.ndarray) -> np.ndarray:
    out = np.zeros_like(points, dtype=complex)
    for c in reversed(f.coefficients):
        out = out * points + complex(c)
    return out


def evolve_by_operator_series(psi, H: HamiltonianSpec, t, order: int, grid: Grid1D | None = None, *,
                              max_degree: int = DEFAULT_MAX_DEGREE,
                              window: tuple | None = None) -> WaveFunction:
    """Evolve ``psi`` by the truncated operator series of the given order.

    ``psi`` is either a :class:`PolynomialState` (then ``grid`` is required
    and the evolution is symbolic before being sampled) or a grid
    :class:`WaveFunction`. A grid state is expanded in plane waves, and for
    a quadratic Hamiltonian, where ``Q̂ = a0 + b q̂ + c p̂`` is linear,

        exp(ik Q̂) K_N(q) = exp(ik a0 + iħk² b c/2 + ik b q) K_N(q + ħ k c)

    is evaluated directly. Non-quadratic Hamiltonians need a polynomial
    state. The result carries a ``series_divergence`` flag when the last
    kernel term is the largest on the window.
    """
    if isinstance(psi, PolynomialState):
        if grid is None:
            raise ValueError("a grid is needed to sample a polynomial state")
        if t == 0:
            amps = psi.evaluate(grid.q)
            return WaveFunction(grid, amps, Representation.POSITION, float(psi.hbar))
        w = window if window is not None else (grid.q_min, grid.q_max)
        res = operator_series_polynomial(psi, H, t, order, max_degree=max_degree, window=w)
        return WaveFunction(grid, res.poly.evaluate(grid.q), Representation.POSITION,
                            float(psi.hbar), res.flags)

    psi = position_state(psi)
    if t == 0:
        return psi
    if not H.is_quadratic:
        raise ValueError("grid states need a quadratic Hamiltonian; pass a PolynomialState instead")
    grid = psi.grid
    hbar = psi.hbar
    series = heisenberg_series(OperatorPolynomial.q(), H, order, max_degree=max_degree)
    a0, b, c = _linear_parts(series.at(-float(t)), hbar)
    kernel_terms = kernel_series_terms(H, float(t), order, hbar)
    kernel = _sum(kernel_terms)

    q = grid.q
    k = grid.k
    A = to_momentum(psi.amplitudes, grid)
    weights = A * np.exp(1j * k * a0 + 0.5j * hbar * k**2 * b * c) * (grid.dk / np.sqrt(2.0 * np.pi))
    out = np.empty(grid.n_points, dtype=complex)
    for start in range(0, grid.n_points, _CHUNK):
        rows = q[start:start + _CHUNK]
        phase = np.exp(1j * np.outer(rows, k * b))
        shifted = _evaluate_shifted(kernel, rows[:, None] + hbar * c * k[None, :])
        out[start:start + _CHUNK] = (phase * shifted) @ weights
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("operator series produced non-finite amplitudes")
    w = window if window is not None else _support_window(psi)
    flags = _divergence_flags(kernel_terms, w)
    return psi.with_amplitudes(out, flags + _leakage_flags(psi.with_amplitudes(out)))


def _support_window(psi: WaveFunction, mass: float = 1e-12) -> tuple:
    # smallest symmetric-about-the-mean window holding all but ``mass`` of |psi|²
    dens = np.abs(psi.amplitudes) ** 2
    cum = np.cumsum(dens) / dens.sum()
    q = psi.grid.q
    lo = q[np.searchsorted(cum, mass)]
    hi = q[min(np.searchsorted(cum, 1 - mass), len(q) - 1)]
    return (float(lo), float(hi))

