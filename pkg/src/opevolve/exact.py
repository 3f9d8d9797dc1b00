"""Exact complex rationals for symbolic coefficient arithmetic.

Coefficients of operator polynomials live in Q(i). ``Fraction`` covers the
real line; :class:`GaussRational` adds the imaginary unit. Mixing with a
float or complex degrades to Python ``complex`` so that numerically
evaluated series (e.g. at a float time) still work through the same code.
"""
from __future__ import annotations

import numbers
from fractions import Fraction
from typing import Union

Exact = Union[int, Fraction, "GaussRational"]


def to_fraction(x) -> Fraction:
    """Convert ``x`` to a Fraction; floats go through their shortest repr.

    ``0.1`` becomes ``1/10`` rather than the binary expansion, which is what
    a user typing physical parameters into a config means.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, numbers.Integral)):
        return Fraction(int(x))
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class GaussRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_fraction(re)
        self.im = to_fraction(im)

    @classmethod
    def coerce(cls, x):
        """Exact values become GaussRational; inexact ones become complex."""
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction, numbers.Integral)):
            return cls(x)
        if isinstance(x, (float, complex, numbers.Complex)):
            return complex(x)
        raise TypeError(f"unsupported coefficient {x!r}")

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = GaussRational.coerce(other)
        if isinstance(other, complex):
            return complex(self) + other
        return GaussRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-GaussRational.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = GaussRational.coerce(other)
        if isinstance(other, complex):
            return complex(self) * other
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRational.coerce(other)
        if isinstance(other, complex):
            return complex(self) / other
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return GaussRational(
            (self.re * other.re + self.im * other.im) / den,
            (self.im * other.re - self.re * other.im) / den,
        )

    def __rtruediv__(self, other):
        other = GaussRational.coerce(other)
        if isinstance(other, complex):
            return other / complex(self)
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return GaussRational(1) / (self ** -n)
        result = GaussRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    # comparison / conversion -----------------------------------------
    def __eq__(self, other):
        try:
            other = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        if isinstance(other, complex):
            return complex(self) == other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussRational({self.re}, {self.im})"

    def __str__(self):
        return format_coefficient(self)


I = GaussRational(0, 1)


def format_coefficient(c) -> str:
    """Canonical text for a coefficient: ``3/2``, ``-i``, ``(1/2+3i)``."""
    if isinstance(c, GaussRational):
        re, im = c.re, c.im
        if im == 0:
            return str(re)
        if re == 0:
            if im == 1:
                return "i"
            if im == -1:
                return "-i"
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        mag = abs(im)
        imag = "i" if mag == 1 else f"{mag}i"
        return f"({re}{sign}{imag})"
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    return f"({c.real!r}{c.imag:+.17g}i)"
