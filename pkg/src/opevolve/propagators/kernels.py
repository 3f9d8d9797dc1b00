"""Closed-form kernels K(q, t): the evolution of the unit function.

Every supported kernel has the shape ``prefactor * exp(quadratic*q**2 +
linear*q)``, so :class:`KernelForm` stores those three numbers plus the
physical parameters that produced them.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..opalgebra.hamiltonians import HamiltonianKind, HamiltonianSpec


class KernelKind(enum.Enum):
    IDENTITY = "identity"
    LINEAR_PHASE = "linear_phase"
    HARMONIC_CLOSED = "harmonic_closed"
    # exp(-i w t/2) exp(-q^2/(2 q0^2)); the outer factor of harmonic polynomial evolution
    HARMONIC_DRESSING = "harmonic_dressing"


@dataclass(frozen=True)
class KernelForm:
    kind: KernelKind
    prefactor: complex = 1.0
    quadratic: complex = 0.0
    linear: complex = 0.0
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, q) -> np.ndarray:
        return self.evaluate(q)

    def evaluate(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if self.kind is KernelKind.IDENTITY:
            return np.ones_like(q, dtype=complex)
        return self.prefactor * np.exp(self.quadratic * q**2 + self.linear * q)


def ho_parameters(omega: float, t: float) -> tuple[complex, complex]:
    """alpha = exp(-i w t), tau = exp(i w t) sin(w t)/w."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    wt = omega * t
    alpha = complex(np.cos(wt), -np.sin(wt))
    tau = complex(np.cos(wt), np.sin(wt)) * np.sin(wt) / omega
    return alpha, tau


def harmonic_width(m: float, omega: float, hbar: float) -> float:
    """Ground-state length q0 = sqrt(ħ/(m w))."""
    return float(np.sqrt(hbar / (m * omega)))


def complex_width_denominator(alpha: complex, tau: complex, omega: float) -> complex:
    """z = 1 - i w alpha² tau, which equals cos(wt) exp(-i w t)."""
    return 1.0 - 1j * omega * alpha**2 * tau


def make_kernel(H: HamiltonianSpec, t: float) -> KernelForm:
    """Kernel of a free, constant-force or harmonic Hamiltonian at time t.

    The constant-force kernel is ``exp(-i F² t³/(6 m ħ)) exp(i F t q/ħ)``.
    The harmonic kernel is undefined where cos(wt) = 0 (the unit function
    focuses to a point) and raises ``ValueError`` there.
    """
    hbar = H.hbar
    m = float(H.mass)
    kind = H.kind
    if kind is HamiltonianKind.FREE:
        return KernelForm(KernelKind.IDENTITY, params={"t": t})
    if kind is HamiltonianKind.CONSTANT_FORCE:
        F = float(H.force)
        pref = np.exp(-1j * F**2 * t**3 / (6.0 * m * hbar))
        return KernelForm(KernelKind.LINEAR_PHASE, pref, 0.0, 1j * F * t / hbar,
                          params={"t": t, "F": F, "m": m, "hbar": hbar})
    if kind is HamiltonianKind.HARMONIC:
        w = float(H.omega)
        alpha, tau = ho_parameters(w, t)
        q0 = harmonic_width(m, w, hbar)
        z = complex_width_denominator(alpha, tau, w)
        if abs(z) < 1e-12:
            raise ValueError("harmonic kernel is singular where cos(wt) = 0")
        pref = np.exp(-0.5j * w * t) / np.sqrt(z)
        quad = (alpha**2 / z - 1.0) / (2.0 * q0**2)
        return KernelForm(KernelKind.HARMONIC_CLOSED, pref, quad, 0.0,
                          params={"t": t, "alpha": alpha, "tau": tau, "q0": q0,
                                  "omega": w, "m": m, "hbar": hbar})
    raise ValueError(f"no closed-form kernel for {kind.value}; use the spectral oracle")


def harmonic_dressing(omega: float, t: float, m: float, hbar: float) -> KernelForm:
    q0 = harmonic_width(m, omega, hbar)
    return KernelForm(KernelKind.HARMONIC_DRESSING, np.exp(-0.5j * omega * t),
                      -1.0 / (2.0 * q0**2), 0.0,
                      params={"t": t, "q0": q0, "omega": omega, "m": m, "hbar": hbar})


def kernel_equivalence_free(k: float, t: float, m: float, q, hbar: float = 1.0) -> np.ndarray:
    """Free kernel rebuilt from the momentum eigenstate exp(i k q).

    Evaluates ``exp(-i E t/ħ) / phi(q̂(-t)) phi(q̂)`` applied to the unit
    function with ``phi = exp(i k q)`` and ``q̂(-t) = q̂ - p̂ t/m``. The inverse
    factor is split as exp(-ikq̂) exp(ikp̂t/m) exp(-iħk²t/(2m)); the middle
    translation turns exp(ikq) into exp(ik(q + ħkt/m)). The product is 1 for
    every k.
    """
    q = np.asarray(q, dtype=float)
    energy_phase = np.exp(-1j * hbar * k**2 * t / (2.0 * m))
    inverse_position = np.exp(-1j * k * q)
    translated_state = np.exp(1j * k * (q + hbar * k * t / m))
    ordering_phase = np.exp(-1j * hbar * k**2 * t / (2.0 * m))
    return energy_phase * inverse_position * translated_state * ordering_phase
