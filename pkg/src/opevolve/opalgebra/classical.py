"""Classical flows Q(q, p, t), P(q, p, t) and their quantization.

Two sources are supported. ``closed`` returns exact trigonometric or
hyperbolic flows for the quadratic family; ``taylor`` iterates the Poisson
bracket ``dF/dt = {F, H}`` for any polynomial H. Either way the flow can
hand out exact Taylor coefficients in t, which is what quantization needs.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from ..exact import GaussRational
from .hamiltonians import HamiltonianKind, HamiltonianSpec, as_operator
from .heisenberg import TimeSeriesOperator
from .polynomial import DEFAULT_MAX_DEGREE, OperatorPolynomial


class ClassicalPolynomial:
    """Commuting polynomial in (q, p): ``{(a, b): coefficient}``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        out = {}
        for key, c in (terms or {}).items():
            c = GaussRational.coerce(c)
            if c != 0:
                out[key] = c
        self._terms = out

    @classmethod
    def q(cls):
        return cls({(1, 0): 1})

    @classmethod
    def p(cls):
        return cls({(0, 1): 1})

    @classmethod
    def from_operator(cls, poly: OperatorPolynomial) -> ClassicalPolynomial:
        """Symbol of the ħ-free part of a normal-ordered operator."""
        return cls({(a, b): c for (a, b, h), c in poly.terms.items() if h == 0})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, ClassicalPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other):
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return ClassicalPolynomial(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return ClassicalPolynomial({k: c * s for k, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ClassicalPolynomial):
            return self.scale(other)
        out = {}
        for (a, b), c in self._terms.items():
            for (x, y), d in other._terms.items():
                k = (a + x, b + y)
                out[k] = out[k] + c * d if k in out else c * d
        return ClassicalPolynomial(out)

    def d_q(self):
        return ClassicalPolynomial({(a - 1, b): c * a for (a, b), c in self._terms.items() if a})

    def d_p(self):
        return ClassicalPolynomial({(a, b - 1): c * b for (a, b), c in self._terms.items() if b})

    def poisson(self, other: ClassicalPolynomial) -> ClassicalPolynomial:
        """{f, g} = f_q g_p - f_p g_q."""
        return self.d_q() * other.d_p() - self.d_p() * other.d_q()

    def evaluate(self, q, p):
        total = 0
        for (a, b), c in self._terms.items():
            total = total + complex(c) * np.power(q, a) * np.power(p, b)
        return total

    def __repr__(self):
        return f"ClassicalPolynomial({self.items()!r})"


@dataclass(frozen=True)
class TimeFunction:
    """scale * f(rate * t) for f in {t^power, cos, sin, cosh, sinh}."""

    kind: str
    scale: object = GaussRational(1)
    rate: object = GaussRational(1)
    power: int = 0

    def derivative_at_zero(self, n: int):
        """Exact n-th derivative at t = 0."""
        s = GaussRational.coerce(self.scale)
        if self.kind == "poly":
            return s * factorial(n) if n == self.power else GaussRational(0)
        r = GaussRational.coerce(self.rate) ** n
        cycle = {
            "cos": (1, 0, -1, 0),
            "sin": (0, 1, 0, -1),
            "cosh": (1, 0, 1, 0),
            "sinh": (0, 1, 0, 1),
        }[self.kind]
        return s * r * cycle[n % 4]

    def __call__(self, t):
        s = complex(self.scale)
        if self.kind == "poly":
            return s * np.power(t, self.power)
        x = complex(self.rate).real * np.asarray(t, dtype=float)
        fn = {"cos": np.cos, "sin": np.sin, "cosh": np.cosh, "sinh": np.sinh}[self.kind]
        return s * fn(x)


class FlowSource(enum.Enum):
    CLOSED_FORM = "closed"
    TAYLOR_SERIES = "taylor"


class ClassicalFlow:
    """Solution map of Hamilton's equations as polynomials in (q, p).

    For ``CLOSED_FORM`` the components are ``{(a, b): [TimeFunction, ...]}``;
    for ``TAYLOR_SERIES`` they are lists of Taylor coefficients (the n-th
    entry multiplies t^n/n!).
    """

    def __init__(self, hamiltonian, source: FlowSource, Q, P, order: int | None = None):
        self.hamiltonian = hamiltonian
        self.source = source
        self.Q = Q
        self.P = P
        self.order = order

    def taylor_coefficients(self, variable: str = "q", order: int | None = None) -> list:
        comp = self.Q if variable == "q" else self.P
        if self.source is FlowSource.TAYLOR_SERIES:
            n_avail = len(comp) - 1
            order = n_avail if order is None else order
            if order > n_avail:
                raise ValueError(f"flow was truncated at order {n_avail}, asked for {order}")
            return list(comp[: order + 1])
        if order is None:
            raise ValueError("order is required for a closed-form flow")
        out = []
        for n in range(order + 1):
            terms = {}
            for key, fns in comp.items():
                v = GaussRational(0)
                for f in fns:
                    v = v + f.derivative_at_zero(n)
                terms[key] = v
            out.append(ClassicalPolynomial(terms))
        return out

    def evaluate(self, variable: str, q, p, t):
        """Numerical value of Q (``variable="q"``) or P at time t."""
        comp = self.Q if variable == "q" else self.P
        if self.source is FlowSource.TAYLOR_SERIES:
            total = 0
            for n, c in enumerate(comp):
                total = total + c.evaluate(q, p) * t**n / factorial(n)
            return total
        total = 0
        for (a, b), fns in comp.items():
            total = total + sum(f(t) for f in fns) * np.power(q, a) * np.power(p, b)
        return total


def _closed_form(H: HamiltonianSpec):
    m = GaussRational(H.mass)
    kind = H.kind
    one = GaussRational(1)
    if kind is HamiltonianKind.FREE:
        Q = {(1, 0): [TimeFunction("poly", one, power=0)],
             (0, 1): [TimeFunction("poly", one / m, power=1)]}
        P = {(0, 1): [TimeFunction("poly", one, power=0)]}
    elif kind is HamiltonianKind.CONSTANT_FORCE:
        F = GaussRational(H.force)
        Q = {(1, 0): [TimeFunction("poly", one, power=0)],
             (0, 1): [TimeFunction("poly", one / m, power=1)],
             (0, 0): [TimeFunction("poly", F / (m * 2), power=2)]}
        P = {(0, 1): [TimeFunction("poly", one, power=0)],
             (0, 0): [TimeFunction("poly", F, power=1)]}
    elif kind is HamiltonianKind.HARMONIC:
        w = GaussRational(H.omega)
        Q = {(1, 0): [TimeFunction("cos", one, w)],
             (0, 1): [TimeFunction("sin", one / (m * w), w)]}
        P = {(0, 1): [TimeFunction("cos", one, w)],
             (1, 0): [TimeFunction("sin", -(m * w), w)]}
    elif kind is HamiltonianKind.INVERTED_HARMONIC:
        lam = GaussRational(H.lam)
        Q = {(1, 0): [TimeFunction("cosh", one, lam)],
             (0, 1): [TimeFunction("sinh", one / (m * lam), lam)]}
        P = {(0, 1): [TimeFunction("cosh", one, lam)],
             (1, 0): [TimeFunction("sinh", m * lam, lam)]}
    else:
        raise ValueError("closed-form flows exist only for the quadratic family")
    return Q, P


def classical_flow(H, source: str | FlowSource = "closed", order: int | None = None) -> ClassicalFlow:
    """Classical solution map for ``H``.

    ``source="closed"`` requires a quadratic ``HamiltonianSpec``;
    ``source="taylor"`` accepts any polynomial Hamiltonian and needs ``order``.
    """
    source = FlowSource(source)
    if source is FlowSource.CLOSED_FORM:
        if not isinstance(H, HamiltonianSpec) or not H.is_quadratic:
            raise ValueError("closed-form flows exist only for the quadratic family")
        Q, P = _closed_form(H)
        return ClassicalFlow(H, source, Q, P)
    if order is None or order < 0:
        raise ValueError("a Taylor-series flow needs a nonnegative order")
    h = ClassicalPolynomial.from_operator(as_operator(H))
    series = {}
    for name, seed in (("q", ClassicalPolynomial.q()), ("p", ClassicalPolynomial.p())):
        coeffs = [seed]
        for _ in range(order):
            coeffs.append(coeffs[-1].poisson(h))
        series[name] = coeffs
    return ClassicalFlow(H, source, series["q"], series["p"], order)


def _weyl_monomial(a: int, b: int, max_degree: int) -> OperatorPolynomial:
    # symmetrized q^a p^b = sum_k k! C(a,k) C(b,k) (-i ħ/2)^k q^(a-k) p^(b-k)
    half = GaussRational(0, -1) / 2
    terms = {}
    for k in range(min(a, b) + 1):
        terms[(a - k, b - k, k)] = (half**k) * (factorial(k) * comb(a, k) * comb(b, k))
    return OperatorPolynomial(terms, max_degree)


def _standard_monomial(a: int, b: int, max_degree: int) -> OperatorPolynomial:
    return OperatorPolynomial({(a, b, 0): 1}, max_degree)


ORDERINGS = {
    "weyl": _weyl_monomial,
    "standard": _standard_monomial,
}


def weyl_quantize(poly: ClassicalPolynomial, ordering: str = "weyl",
                  max_degree: int = DEFAULT_MAX_DEGREE) -> OperatorPolynomial:
    """Replace q, p by q̂, p̂ under the chosen ordering rule.

    ``"weyl"`` averages all distinct orderings of each monomial's factors;
    ``"standard"`` puts every q̂ to the left.
    """
    try:
        rule = ORDERINGS[ordering]
    except KeyError:
        raise ValueError(f"unknown ordering {ordering!r}; choose from {sorted(ORDERINGS)}") from None
    out = OperatorPolynomial.zero()
    for (a, b), c in poly.items():
        if a + b > max_degree:
            raise ValueError(f"monomial degree {a + b} exceeds the limit of {max_degree}")
        out = out + rule(a, b, max_degree).scale(c)
    return out


def quantize_flow(flow: ClassicalFlow, order: int, variable: str = "q",
                  ordering: str = "weyl") -> TimeSeriesOperator:
    """Quantize each Taylor coefficient of Q (or P) into an operator series."""
    coeffs = flow.taylor_coefficients(variable, order)
    return TimeSeriesOperator(tuple(weyl_quantize(c, ordering) for c in coeffs), variable)
