"""Operator polynomials acting on things: Gaussian conjugation and grid states."""
from __future__ import annotations

import numpy as np

from ..exact import GaussRational
from ..wavefield import Representation, WaveFunction, momentum_multiply
from .polynomial import OperatorPolynomial

# Largest spectral amplification |ħ k_max|**b tolerated before refusing.
MAX_AMPLIFICATION = 1e200


def gaussian_similarity(poly: OperatorPolynomial, g) -> OperatorPolynomial:
    """Conjugate by a Gaussian: exp(g q̂²) f(q̂, p̂) exp(-g q̂²) = f(q̂, p̂ + 2iħg q̂).

    ``g`` may be complex; with ``g = 1/(2 q0²)`` this moves a ground-state
    factor ``exp(-q²/(2 q0²))`` from the right of ``f`` to its left.
    """
    shift = OperatorPolynomial.q() * OperatorPolynomial.hbar() * (GaussRational(0, 2) * g)
    p_new = OperatorPolynomial.p() + shift
    out = OperatorPolynomial.zero()
    for (a, b, h), c in poly.items():
        out = out + (OperatorPolynomial.q(a) * (p_new**b)).scale(c) * OperatorPolynomial.hbar(h)
    return out


def apply_operator_polynomial(poly: OperatorPolynomial, psi: WaveFunction,
                              max_amplification: float = MAX_AMPLIFICATION) -> WaveFunction:
    """Act with a normal-ordered polynomial on a position-space grid state.

    For each term q̂^a p̂^b the p̂ power is applied spectrally (multiply by
    (ħk)^b in momentum space) and the q̂ power pointwise. ħ is taken from
    ``psi``.
    """
    if psi.representation is not Representation.POSITION:
        raise ValueError("apply_operator_polynomial needs a position-space state")
    grid = psi.grid
    hk = psi.hbar * grid.k
    kmax = psi.hbar * grid.k_max
    coeffs = poly.substitute_hbar(psi.hbar)
    by_b: dict = {}
    for (a, b), c in coeffs.items():
        by_b.setdefault(b, []).append((a, complex(c)))
    q = grid.q
    out = np.zeros(grid.n_points, dtype=complex)
    for b, qterms in by_b.items():
        if b and b * np.log(max(kmax, 1.0)) > np.log(max_amplification):
            raise OverflowError(
                f"p̂^{b} amplifies by up to {kmax:.3g}^{b}, beyond the guard {max_amplification:.1e}"
            )
        dpsi = psi.amplitudes if b == 0 else momentum_multiply(psi.amplitudes, grid, hk**b)
        qpoly = np.zeros_like(q, dtype=complex)
        for a, c in qterms:
            qpoly = qpoly + c * q**a
        out = out + qpoly * dpsi
    return psi.with_amplitudes(out)
