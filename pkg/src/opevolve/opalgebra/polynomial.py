"""Normal-ordered polynomials in q̂ and p̂ with [q̂, p̂] = iħ.

A monomial key ``(a, b, h)`` stands for ``q̂**a p̂**b ħ**h``: every q̂ sits
to the left of every p̂ and ħ is carried as a formal grading, so identities
such as "no ħ survives in the series" are checked exactly rather than
numerically.
"""
from __future__ import annotations

from math import comb, factorial
from typing import Iterable, Mapping

from ..exact import GaussRational, format_coefficient

DEFAULT_MAX_DEGREE = 32

_MINUS_I = GaussRational(0, -1)


class DegreeGuardError(ArithmeticError):
    """Raised when a product would exceed the configured total degree."""


def _clean(terms: Mapping) -> dict:
    out = {}
    for key, c in terms.items():
        c = GaussRational.coerce(c)
        if c != 0:
            out[key] = c
    return out


class OperatorPolynomial:
    """Finite sum of ``c * q̂**a p̂**b ħ**h`` terms, immutable."""

    __slots__ = ("_terms", "max_degree")

    def __init__(self, terms: Mapping | None = None, max_degree: int = DEFAULT_MAX_DEGREE):
        self._terms = _clean(terms or {})
        self.max_degree = max_degree
        for a, b, h in self._terms:
            if min(a, b, h) < 0:
                raise ValueError(f"negative power in monomial {(a, b, h)}")

    # constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c=1) -> OperatorPolynomial:
        return cls({(0, 0, 0): c})

    @classmethod
    def q(cls, power: int = 1) -> OperatorPolynomial:
        return cls({(power, 0, 0): 1})

    @classmethod
    def p(cls, power: int = 1) -> OperatorPolynomial:
        return cls({(0, power, 0): 1})

    @classmethod
    def hbar(cls, power: int = 1) -> OperatorPolynomial:
        return cls({(0, 0, power): 1})

    @classmethod
    def zero(cls) -> OperatorPolynomial:
        return cls({})

    # basic protocol ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, a: int, b: int, h: int = 0):
        return self._terms.get((a, b, h), GaussRational(0))

    @property
    def degree(self) -> int:
        """Total degree in q̂ and p̂ (ħ not counted); -1 for the zero polynomial."""
        return max((a + b for a, b, _ in self._terms), default=-1)

    @property
    def hbar_degree(self) -> int:
        return max((h for _, _, h in self._terms), default=0)

    def hbar_free(self) -> bool:
        return all(h == 0 for _, _, h in self._terms)

    def is_exact(self) -> bool:
        return all(isinstance(c, GaussRational) for c in self._terms.values())

    def __eq__(self, other):
        if not isinstance(other, OperatorPolynomial):
            try:
                other = OperatorPolynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # arithmetic -------------------------------------------------------
    def _wrap(self, other) -> OperatorPolynomial:
        if isinstance(other, OperatorPolynomial):
            return other
        return OperatorPolynomial.constant(other)

    def __add__(self, other):
        other = self._wrap(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out[key] + c if key in out else c
        return OperatorPolynomial(out, self.max_degree)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPolynomial({k: -c for k, c in self._terms.items()}, self.max_degree)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def scale(self, s) -> OperatorPolynomial:
        return OperatorPolynomial({k: c * s for k, c in self._terms.items()}, self.max_degree)

    def __mul__(self, other):
        if not isinstance(other, OperatorPolynomial):
            return self.scale(other)
        return multiply(self, other, max_degree=min(self.max_degree, other.max_degree))

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, s):
        return self.scale(GaussRational(1) / GaussRational.coerce(s))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of operators are not polynomials")
        result = OperatorPolynomial.constant(1)
        result.max_degree = self.max_degree
        for _ in range(n):
            result = result * self
        return result

    # structure ----------------------------------------------------------
    def adjoint(self) -> OperatorPolynomial:
        """Formal adjoint: (c q^a p^b)† = conj(c) p^b q^a, re-normal-ordered."""
        out = OperatorPolynomial.zero()
        for (a, b, h), c in self._terms.items():
            conj = c.conjugate() if hasattr(c, "conjugate") else c
            mono = multiply(OperatorPolynomial.p(b), OperatorPolynomial.q(a), max_degree=self.max_degree)
            out = out + mono.scale(conj) * OperatorPolynomial.hbar(h)
        return out

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def classical_limit(self) -> OperatorPolynomial:
        """Drop every term carrying a positive power of ħ."""
        return OperatorPolynomial({k: c for k, c in self._terms.items() if k[2] == 0}, self.max_degree)

    def partial_p(self) -> OperatorPolynomial:
        """Formal derivative with respect to p̂ of the normal-ordered form."""
        return OperatorPolynomial(
            {(a, b - 1, h): c * b for (a, b, h), c in self._terms.items() if b > 0}, self.max_degree
        )

    def partial_q(self) -> OperatorPolynomial:
        return OperatorPolynomial(
            {(a - 1, b, h): c * a for (a, b, h), c in self._terms.items() if a > 0}, self.max_degree
        )

    def substitute_hbar(self, hbar) -> dict:
        """Collapse the ħ grading at a numeric (or exact) value of ħ.

        Returns ``{(a, b): coefficient}``.
        """
        out: dict = {}
        for (a, b, h), c in self._terms.items():
            v = c * (hbar**h) if h else c
            out[(a, b)] = out[(a, b)] + v if (a, b) in out else v
        return {k: v for k, v in out.items() if v != 0}

    def map_coefficients(self, fn) -> OperatorPolynomial:
        return OperatorPolynomial({k: fn(c) for k, c in self._terms.items()}, self.max_degree)

    # text ---------------------------------------------------------------
    def render(self) -> str:
        """Canonical, diffable text sorted by (a, b, h)."""
        if not self._terms:
            return "0"
        parts = []
        for (a, b, h), c in self.items():
            parts.append(_render_term(c, _monomial_factors(a, b, h)))
        return _join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"OperatorPolynomial({self.render()!r})"


def _monomial_factors(a: int, b: int, h: int, extra: Iterable[str] = ()) -> list:
    factors = list(extra)
    for sym, n in (("q", a), ("p", b), ("hbar", h)):
        if n == 1:
            factors.append(sym)
        elif n > 1:
            factors.append(f"{sym}^{n}")
    return factors


def _render_term(c, factors: list) -> str:
    body = "·".join(factors)
    coef = format_coefficient(c)
    if not body:
        return coef
    if coef == "1":
        return body
    if coef == "-1":
        return "-" + body
    return f"{coef}·{body}"


def _join_terms(parts: list) -> str:
    text = parts[0]
    for part in parts[1:]:
        if part.startswith("-"):
            text += " - " + part[1:]
        else:
            text += " + " + part
    return text


def _reorder_coefficient(b: int, c: int, k: int) -> GaussRational:
    # p^b q^c = sum_k k! C(b,k) C(c,k) (-i)^k hbar^k q^(c-k) p^(b-k)
    return (_MINUS_I**k) * (factorial(k) * comb(b, k) * comb(c, k))


def multiply(x: OperatorPolynomial, y: OperatorPolynomial,
             max_degree: int = DEFAULT_MAX_DEGREE) -> OperatorPolynomial:
    """Product of two normal-ordered polynomials, normal-ordered."""
    out: dict = {}
    for (a, b, h1), c1 in x._terms.items():
        for (c, d, h2), c2 in y._terms.items():
            if a + b + c + d > max_degree:
                raise DegreeGuardError(
                    f"monomial degree {a + b + c + d} exceeds the limit of {max_degree}"
                )
            base = c1 * c2
            for k in range(min(b, c) + 1):
                key = (a + c - k, b + d - k, h1 + h2 + k)
                v = base * _reorder_coefficient(b, c, k)
                out[key] = out[key] + v if key in out else v
    return OperatorPolynomial(out, max_degree)


def normal_order(word, prefactor=1, max_degree: int = DEFAULT_MAX_DEGREE) -> OperatorPolynomial:
    """Normal-order a product of q̂ and p̂ factors.

    ``word`` is a string or sequence over ``{"q", "p"}`` read left to right,
    e.g. ``"pqp"`` for p̂q̂p̂.
    """
    result = OperatorPolynomial.constant(prefactor)
    gens = {"q": OperatorPolynomial.q(), "p": OperatorPolynomial.p()}
    for letter in word:
        try:
            g = gens[letter]
        except KeyError:
            raise ValueError(f"unknown operator letter {letter!r}") from None
        result = multiply(result, g, max_degree=max_degree)
    return result


def commutator(a: OperatorPolynomial, b: OperatorPolynomial) -> OperatorPolynomial:
    return a * b - b * a
