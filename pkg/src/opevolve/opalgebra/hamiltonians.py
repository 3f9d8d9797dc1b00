"""Hamiltonians of the form used throughout the toolkit.

Physical parameters are stored exactly (``Fraction``) so the symbolic
machinery stays in rational arithmetic; floats are read through their
shortest decimal repr (``0.1`` is ``1/10``).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..exact import to_fraction
from .polynomial import OperatorPolynomial


class HamiltonianKind(enum.Enum):
    FREE = "free"
    CONSTANT_FORCE = "constant_force"
    HARMONIC = "harmonic"
    INVERTED_HARMONIC = "inverted_harmonic"
    CUSTOM = "custom"


QUADRATIC_KINDS = (
    HamiltonianKind.FREE,
    HamiltonianKind.CONSTANT_FORCE,
    HamiltonianKind.HARMONIC,
    HamiltonianKind.INVERTED_HARMONIC,
)


@dataclass(frozen=True)
class HamiltonianSpec:
    kind: HamiltonianKind
    mass: Fraction = Fraction(1)
    force: Fraction = Fraction(0)
    omega: Fraction = Fraction(0)
    lam: Fraction = Fraction(0)
    custom: OperatorPolynomial | None = field(default=None, compare=False)
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "force", "omega", "lam"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        kind = self.kind
        if kind is HamiltonianKind.CUSTOM:
            if not isinstance(self.custom, OperatorPolynomial):
                raise TypeError("a custom Hamiltonian must be an OperatorPolynomial")
            if not self.custom.is_hermitian():
                raise ValueError("custom Hamiltonian is not Hermitian")
            return
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if kind is HamiltonianKind.HARMONIC and not self.omega > 0:
            raise ValueError("omega must be positive")
        if kind is HamiltonianKind.INVERTED_HARMONIC and not self.lam > 0:
            raise ValueError("lambda must be positive")

    # constructors ---------------------------------------------------------
    @classmethod
    def free(cls, m=1, hbar=1.0):
        return cls(HamiltonianKind.FREE, mass=m, hbar=hbar)

    @classmethod
    def constant_force(cls, m=1, F=1, hbar=1.0):
        return cls(HamiltonianKind.CONSTANT_FORCE, mass=m, force=F, hbar=hbar)

    @classmethod
    def harmonic(cls, m=1, omega=1, hbar=1.0):
        return cls(HamiltonianKind.HARMONIC, mass=m, omega=omega, hbar=hbar)

    @classmethod
    def inverted_harmonic(cls, m=1, lam=1, hbar=1.0):
        return cls(HamiltonianKind.INVERTED_HARMONIC, mass=m, lam=lam, hbar=hbar)

    @classmethod
    def custom_polynomial(cls, poly: OperatorPolynomial, hbar=1.0):
        return cls(HamiltonianKind.CUSTOM, custom=poly, hbar=hbar)

    # views ---------------------------------------------------------------
    @property
    def is_quadratic(self) -> bool:
        return self.kind in QUADRATIC_KINDS

    def operator(self) -> OperatorPolynomial:
        """Normal-ordered operator form."""
        if self.kind is HamiltonianKind.CUSTOM:
            return self.custom
        m = self.mass
        kinetic = OperatorPolynomial.p(2) / (2 * m)
        if self.kind is HamiltonianKind.FREE:
            return kinetic
        if self.kind is HamiltonianKind.CONSTANT_FORCE:
            return kinetic - OperatorPolynomial.q() * self.force
        if self.kind is HamiltonianKind.HARMONIC:
            return kinetic + OperatorPolynomial.q(2) * (m * self.omega**2 / 2)
        return kinetic - OperatorPolynomial.q(2) * (m * self.lam**2 / 2)

    def kinetic_mass(self) -> Fraction:
        """Mass of a ``p̂²/2m + V(q̂)`` Hamiltonian.

        Raises ``ValueError`` when the operator is not of that separable form.
        """
        if self.kind is not HamiltonianKind.CUSTOM:
            return self.mass
        terms = self.custom.terms
        p_terms = {k: c for k, c in terms.items() if k[1] > 0}
        if set(p_terms) != {(0, 2, 0)}:
            raise ValueError("Hamiltonian is not of the form p²/2m + V(q)")
        c = p_terms[(0, 2, 0)]
        if c.im != 0 or not c.re > 0:
            raise ValueError("kinetic coefficient must be real and positive")
        return 1 / (2 * c.re)

    def potential(self, q: np.ndarray) -> np.ndarray:
        """Real potential V(q) for separable Hamiltonians (uses ``self.hbar``)."""
        self.kinetic_mass()
        q = np.asarray(q, dtype=float)
        v = np.zeros_like(q)
        coeffs = self.operator().substitute_hbar(self.hbar)
        for (a, b), c in coeffs.items():
            if b:
                continue
            c = complex(c)
            if abs(c.imag) > 1e-14 * max(1.0, abs(c.real)):
                raise ValueError("potential has a non-real coefficient")
            v = v + c.real * q**a
        return v

    def describe(self) -> str:
        k = self.kind
        m = self.mass
        if k is HamiltonianKind.FREE:
            return f"Free(m={m})"
        if k is HamiltonianKind.CONSTANT_FORCE:
            return f"ConstantForce(m={m}, F={self.force})"
        if k is HamiltonianKind.HARMONIC:
            return f"Harmonic(m={m}, omega={self.omega})"
        if k is HamiltonianKind.INVERTED_HARMONIC:
            return f"InvertedHarmonic(m={m}, lambda={self.lam})"
        return f"Custom({self.custom.render()})"


def as_operator(H) -> OperatorPolynomial:
    if isinstance(H, HamiltonianSpec):
        return H.operator()
    if isinstance(H, OperatorPolynomial):
        return H
    raise TypeError(f"expected a HamiltonianSpec or OperatorPolynomial, got {type(H).__name__}")
