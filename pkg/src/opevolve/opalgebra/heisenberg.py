"""Heisenberg-picture time derivatives and truncated Taylor series."""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from ..exact import GaussRational
from .hamiltonians import as_operator
from .polynomial import (
    DEFAULT_MAX_DEGREE,
    OperatorPolynomial,
    _join_terms,
    _monomial_factors,
    _render_term,
    commutator,
)

# 1/i
_MINUS_I = GaussRational(0, -1)


def heisenberg_derivative(A: OperatorPolynomial, H) -> OperatorPolynomial:
    """dA/dt = [A, H]/(iħ), with the ħ grading lowered by one.

    Every term of a normal-ordered commutator carries at least one power of
    ħ, so the division is exact and no negative powers appear.
    """
    Hop = as_operator(H)
    comm = commutator(A, Hop)
    out = {}
    for (a, b, h), c in comm.terms.items():
        if h == 0:
            raise ArithmeticError("commutator term without a factor of ħ")
        out[(a, b, h - 1)] = c * _MINUS_I
    return OperatorPolynomial(out, A.max_degree)


@dataclass(frozen=True)
class TimeSeriesOperator:
    """Taylor coefficients of an operator in time.

    ``coefficients[n]`` is the n-th time derivative at t = 0, so the
    operator is ``sum(t**n / n! * coefficients[n])``.
    """

    coefficients: tuple
    label: str = "q"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        if not self.coefficients:
            raise ValueError("a time series needs at least the zeroth coefficient")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> OperatorPolynomial:
        return self.coefficients[n]

    def __len__(self):
        return len(self.coefficients)

    def at(self, t) -> OperatorPolynomial:
        """Sum the truncated series at time ``t`` (exact if ``t`` is exact)."""
        total = OperatorPolynomial.zero()
        power = GaussRational(1)
        for n, c in enumerate(self.coefficients):
            if n:
                power = power * t
            total = total + c.scale(power / factorial(n))
        return total

    def terminates_at(self) -> int:
        """Index of the last nonzero coefficient (-1 if all vanish)."""
        last = -1
        for n, c in enumerate(self.coefficients):
            if not c.is_zero():
                last = n
        return last

    def hbar_free(self) -> bool:
        return all(c.hbar_free() for c in self.coefficients)

    def render(self) -> str:
        """Flattened ``sum t^n/n! C_n`` in canonical order (by n, then (a, b, h))."""
        parts = []
        for n, c in enumerate(self.coefficients):
            scale = GaussRational(1, 0) / factorial(n)
            for (a, b, h), v in c.items():
                tfac = [] if n == 0 else (["t"] if n == 1 else [f"t^{n}"])
                parts.append(_render_term(v * scale, _monomial_factors(a, b, h, extra=tfac)))
        return _join_terms(parts) if parts else "0"


def heisenberg_series(A: OperatorPolynomial, H, order: int, classical_limit: bool = False,
                      max_degree: int = DEFAULT_MAX_DEGREE) -> TimeSeriesOperator:
    """Repeated Heisenberg derivatives of ``A`` up to ``order``.

    With ``classical_limit=True`` the ħ-carrying terms are dropped after
    every step, which is the same as letting ħ go to zero: the recursion
    becomes the Poisson bracket.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    Hop = as_operator(H)
    if classical_limit:
        Hop = Hop.classical_limit()
    current = OperatorPolynomial(A.terms, max_degree)
    if classical_limit:
        current = current.classical_limit()
    coeffs = [current]
    for _ in range(order):
        current = heisenberg_derivative(current, Hop)
        if classical_limit:
            current = current.classical_limit()
        coeffs.append(current)
    label = A.render()
    return TimeSeriesOperator(tuple(coeffs), label)
