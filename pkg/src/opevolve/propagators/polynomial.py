"""Evolution of polynomial wavefunctions.

Under free flow q**n evolves into ``(q + c d/dq)**n 1`` with ``c = iħt/m``.
The closed form used here is

    sum over l with n - l even of  C(n, l) * (n - l - 1)!! * c**((n - l)/2) * q**l

which is what the Gaussian-moment argument produces; the recursive oracle
in :mod:`opevolve.oracle` rebuilds the same coefficients by brute force.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.special import gammaln

from ..exact import GaussRational, to_fraction
from ..opalgebra.hamiltonians import HamiltonianKind, HamiltonianSpec
from .kernels import (
    KernelForm,
    complex_width_denominator,
    harmonic_dressing,
    harmonic_width,
    ho_parameters,
    make_kernel,
)


def _num(x):
    """Keep exact inputs exact; everything else becomes complex."""
    if isinstance(x, (int, GaussRational)) or type(x).__name__ == "Fraction":
        return GaussRational.coerce(x)
    return complex(x)


def _is_zero(c) -> bool:
    return c == 0


@dataclass(frozen=True)
class PolynomialState:
    """psi(q) = sum coefficients[n] * q**n."""

    coefficients: tuple
    hbar: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        coeffs = [_num(c) for c in self.coefficients]
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n):
        return self.coefficients[n] if n < len(self.coefficients) else GaussRational(0)

    def evaluate(self, q) -> np.ndarray:
        q = np.asarray(q)
        if not np.iscomplexobj(q):
            q = q.astype(float)
        out = np.zeros_like(q, dtype=complex)
        for c in reversed(self.coefficients):
            out = out * q + complex(c)
        return out

    def shifted(self, s) -> PolynomialState:
        """Coefficients of psi(q - s)."""
        s = _num(s)
        n = len(self.coefficients)
        out = [GaussRational(0)] * n
        for j, c in enumerate(self.coefficients):
            # (q - s)^j = sum_l C(j,l) q^l (-s)^(j-l)
            for l in range(j + 1):
                out[l] = out[l] + c * comb(j, l) * (-s) ** (j - l)
        return PolynomialState(tuple(out), self.hbar, self.m)

    def derivative(self, order: int = 1) -> PolynomialState:
        coeffs = list(self.coefficients)
        for _ in range(order):
            coeffs = [coeffs[n] * n for n in range(1, len(coeffs))]
        return PolynomialState(tuple(coeffs), self.hbar, self.m)

    def __add__(self, other: PolynomialState) -> PolynomialState:
        n = max(len(self.coefficients), len(other.coefficients))
        return PolynomialState(tuple(self[i] + other[i] for i in range(n)), self.hbar, self.m)

    def scale(self, s) -> PolynomialState:
        return PolynomialState(tuple(c * s for c in self.coefficients), self.hbar, self.m)

    def __mul__(self, other: PolynomialState) -> PolynomialState:
        if not self.coefficients or not other.coefficients:
            return PolynomialState((), self.hbar, self.m)
        out = [GaussRational(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return PolynomialState(tuple(out), self.hbar, self.m)

    def __eq__(self, other):
        if not isinstance(other, PolynomialState):
            return NotImplemented
        return self.coefficients == other.coefficients


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 0!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def free_polynomial_coefficients(n: int, c) -> tuple:
    """Coefficients of (q + c d/dq)**n applied to 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    c = _num(c)
    out = [GaussRational(0)] * (n + 1)
    for l in range(n, -1, -2):
        j = (n - l) // 2
        out[l] = (c**j) * (comb(n, l) * double_factorial(n - l - 1))
    return tuple(out)


def dispersion_constant(t, m, hbar):
    """c = iħt/m, exact when t, m and ħ are."""
    exact = all(isinstance(x, int) or type(x).__name__ == "Fraction" for x in (t, m, hbar))
    if exact:
        return GaussRational(0, to_fraction(hbar) * to_fraction(t) / to_fraction(m))
    return 1j * complex(hbar) * complex(t) / complex(m)


def free_polynomial(n: int, t, m=1, hbar=1) -> PolynomialState:
    """Free evolution of q**n for time ``t`` (complex t is allowed)."""
    c = dispersion_constant(t, m, hbar)
    return PolynomialState(free_polynomial_coefficients(n, c), float(hbar), float(m))


def _free_image(n: int, c, start, out: list) -> None:
    """Add ``start * (q + c d/dq)**n 1`` into ``out``.

    Walks down from q**n with the ratio between neighbouring coefficients,
    (n-2j)(n-2j-1) c / (2j+2), which equals the closed form but never forms
    the large factorials (floats would overflow for n in the hundreds).
    """
    v = start
    out[n] = out[n] + v
    for j in range(n // 2):
        v = v * c * ((n - 2 * j) * (n - 2 * j - 1)) / (2 * j + 2)
        out[n - 2 * j - 2] = out[n - 2 * j - 2] + v


def _log_double_factorial_odd(j: np.ndarray) -> np.ndarray:
    # log((2j-1)!!) = log((2j)!) - j log 2 - log(j!)
    return gammaln(2 * j + 1) - j * np.log(2.0) - gammaln(j + 1)


def _weighted_free_image(N: int, k: int, a: complex, beta: complex, c: complex) -> np.ndarray:
    """Coefficients of ``a beta^k/k! (q + c d/dq)^N 1`` as a length-(N+1) array.

    Magnitudes are assembled in log space because ``beta^k/k!`` alone
    underflows long before the product with the binomial and double
    factorial stops mattering.
    """
    out = np.zeros(N + 1, dtype=complex)
    if a == 0 or (k and beta == 0):
        return out
    j = np.arange(N // 2 + 1)
    l = N - 2 * j
    log_mag = (np.log(abs(a)) - gammaln(k + 1)
               + gammaln(N + 1) - gammaln(l + 1) - gammaln(2 * j + 1)
               + _log_double_factorial_odd(j))
    phase = np.angle(a) * np.ones_like(log_mag)
    if k:
        log_mag += k * np.log(abs(beta))
        phase += k * np.angle(beta)
    if c != 0:
        log_mag[1:] += j[1:] * np.log(abs(c))
        phase[1:] += j[1:] * np.angle(c)
    else:
        log_mag[1:] = -np.inf
    out[l] = np.exp(log_mag + 1j * phase)
    return out


def evolve_free_polynomial(p: PolynomialState, c) -> PolynomialState:
    """Apply free evolution with dispersion constant ``c`` termwise."""
    c = _num(c)
    total = [GaussRational(0)] * max(len(p.coefficients), 1)
    for n, a in enumerate(p.coefficients):
        if not _is_zero(a):
            _free_image(n, c, a, total)
    return PolynomialState(tuple(total), p.hbar, p.m)


@dataclass(frozen=True)
class EvolvedPolynomial:
    """psi(q, t) = factor(q) * poly(q).

    ``truncation_bound`` estimates the dropped tail on ``window`` when the
    Gaussian-factor series was truncated (harmonic case only).
    """

    poly: PolynomialState
    factor: KernelForm
    truncation_bound: float = 0.0
    terms_used: int = 0
    window: tuple | None = None
    flags: tuple = field(default=())
    roundoff_bound: float = 0.0

    def evaluate(self, q) -> np.ndarray:
        """Values at ``q``; points outside ``window`` are refused when one is set."""
        q = np.asarray(q, dtype=float)
        if self.window is not None and np.any((q < self.window[0]) | (q > self.window[1])):
            raise ValueError(f"truncated series is only valid on the window {self.window}")
        return self.factor.evaluate(q) * self.poly.evaluate(q)

    def evaluate_windowed(self, q) -> tuple[np.ndarray, tuple]:
        """Values inside ``window`` and zero outside, with a flag if anything was cut."""
        q = np.asarray(q, dtype=float)
        if self.window is None:
            return self.evaluate(q), ()
        inside = (q >= self.window[0]) & (q <= self.window[1])
        out = np.zeros(q.shape, dtype=complex)
        out[inside] = self.evaluate(q[inside])
        return out, (() if inside.all() else ("outside_window_zeroed",))


class TruncationError(ArithmeticError):
    """Raised when a truncated expansion cannot reach the requested tolerance."""


def evolve_polynomial_state(p: PolynomialState, H: HamiltonianSpec, t, *,
                            window: tuple = (-4.0, 4.0), tol: float = 1e-10,
                            k_max: int | None = None, max_terms: int = 400,
                            resummed: bool = False) -> EvolvedPolynomial:
    """Evolve a polynomial state under a free, constant-force or harmonic H.

    Free and constant-force results are exact polynomials times the kernel.
    The harmonic result expands ``exp(alpha² q²/(2 q0²))`` in a power series;
    terms are added until the estimated tail on ``window`` drops below
    ``tol`` (or exactly ``k_max`` terms when given). ħ is taken from ``p``.

    Near wt = pi/2 the individual series terms cancel so strongly that
    double precision cannot reach ``tol`` and TruncationError is raised.
    ``resummed=True`` sums the Gaussian factor in closed form instead (see
    :func:`harmonic_polynomial_resummed`); it ignores window, tol and k_max.
    """
    kind = H.kind
    m = H.mass
    if kind is HamiltonianKind.FREE:
        c = dispersion_constant(t, m, _exactish(p.hbar))
        return EvolvedPolynomial(evolve_free_polynomial(p, c), make_kernel(H, float(t)),
                                 flags=("free_polynomial_double_factorial",))
    if kind is HamiltonianKind.CONSTANT_FORCE:
        c = dispersion_constant(t, m, _exactish(p.hbar))
        free = evolve_free_polynomial(p, c)
        if all(isinstance(x, GaussRational) for x in free.coefficients) and _is_exact(t):
            s = GaussRational(to_fraction(H.force) * to_fraction(t) ** 2 / (2 * to_fraction(m)))
        else:
            s = complex(float(H.force) * float(t) ** 2 / (2.0 * float(m)))
        kernel = make_kernel(_with_hbar(H, p.hbar), float(t))
        return EvolvedPolynomial(free.shifted(s), kernel, flags=("free_polynomial_double_factorial",
                                                                  "constant_force_kernel_time_factor"))
    if kind is HamiltonianKind.HARMONIC and resummed:
        return harmonic_polynomial_resummed(p, H, float(t))
    if kind is HamiltonianKind.HARMONIC:
        return _evolve_harmonic_polynomial(p, H, float(t), window, tol, k_max, max_terms)
    raise ValueError(f"polynomial evolution is not available for {kind.value}")


def _is_exact(x) -> bool:
    return isinstance(x, int) or type(x).__name__ == "Fraction"


def _exactish(hbar):
    # hbar is stored as float; 1.0 and other short decimals are read exactly
    return to_fraction(hbar)


def _with_hbar(H: HamiltonianSpec, hbar: float) -> HamiltonianSpec:
    if H.hbar == hbar:
        return H
    return HamiltonianSpec(H.kind, H.mass, H.force, H.omega, H.lam, H.custom, hbar)


def _evolve_harmonic_polynomial(p, H, t, window, tol, k_max, max_terms):
    hbar = float(p.hbar)
    m = float(H.mass)
    w = float(H.omega)
    alpha, tau = ho_parameters(w, t)
    q0 = harmonic_width(m, w, hbar)
    beta = alpha**2 / (2.0 * q0**2)
    c = 1j * hbar * tau / m
    dressing = harmonic_dressing(w, t, m, hbar)
    scaled = PolynomialState(tuple(complex(a) * alpha**n for n, a in enumerate(p.coefficients)), hbar, m)

    xs = np.linspace(window[0], window[1], 201)
    envelope = np.abs(dressing.evaluate(xs))
    ratio_floor = abs(np.sin(w * t))

    total = PolynomialState((0j,), hbar, m)
    eps = np.finfo(float).eps
    condition = np.zeros_like(xs)
    sizes = []
    bound = np.inf
    roundoff = 0.0
    k = 0
    limit = k_max if k_max is not None else max_terms
    while k <= limit:
        # free image of scaled(x) * beta^k x^(2k) / k!
        acc = np.zeros(2 * k + len(scaled.coefficients), dtype=complex)
        for n, a in enumerate(scaled.coefficients):
            if a != 0:
                acc[:2 * k + n + 1] += _weighted_free_image(2 * k + n, k, complex(a), beta, c)
        contribution = PolynomialState(tuple(acc), hbar, m)
        total = total + contribution
        sizes.append(float(np.max(np.abs(contribution.evaluate(xs)) * envelope)))
        # cancellation inside one term costs about eps * sum |a_l| R^l
        condition += PolynomialState(tuple(np.abs(acc)), hbar, m).evaluate(np.abs(xs)).real * envelope
        roundoff = eps * float(condition.max())
        if len(sizes) >= 4:
            # trust a geometric tail only when the last few terms all shrink
            ratios = [b / a if a > 0 else np.inf for a, b in zip(sizes[-4:-1], sizes[-3:])]
            r = max(ratio_floor, *ratios)
            bound = sizes[-1] * r / (1.0 - r) if r < 1 else np.inf
        k += 1
        if k_max is None and bound + roundoff < tol:
            break
    if k_max is None and not bound + roundoff < tol:
        raise TruncationError(
            f"harmonic series on window {window} cannot reach tolerance {tol:g} "
            f"(tail estimate {bound:.3g}, roundoff estimate {roundoff:.3g})"
        )
    flags = ("harmonic_polynomial_double_factorial",)
    return EvolvedPolynomial(total, dressing, float(bound), k, tuple(window), flags, float(roundoff))


def harmonic_polynomial_resummed(p: PolynomialState, H: HamiltonianSpec, t: float) -> EvolvedPolynomial:
    """Harmonic evolution of a polynomial with the Gaussian factor summed exactly.

    Completing the square turns the free flow of ``P(x) exp(beta x²)`` into
    ``z**-1/2 exp(beta q²/z)`` times the free image of ``P`` with ``c/z``,
    evaluated at ``q/z``. With the dressing this is a polynomial times the
    harmonic kernel, valid for all q away from the focal times (z = 0).
    """
    hbar = float(p.hbar)
    m = float(H.mass)
    w = float(H.omega)
    alpha, tau = ho_parameters(w, t)
    z = complex_width_denominator(alpha, tau, w)
    if abs(z) < 1e-12:
        raise ValueError(f"t = {t} is a focal time; the harmonic kernel is singular there")
    c = 1j * hbar * tau / m
    scaled = PolynomialState(tuple(complex(a) * alpha**n for n, a in enumerate(p.coefficients)), hbar, m)
    image = evolve_free_polynomial(scaled, c / z)
    poly = PolynomialState(tuple(complex(f) / z**l for l, f in enumerate(image.coefficients)), hbar, m)
    return EvolvedPolynomial(poly, make_kernel(_with_hbar(H, hbar), t), terms_used=1,
                             flags=("harmonic_polynomial_resummed",))
