"""Exact quadratic surds ``rational + sign * sqrt(square)``.

Only the handful of operations needed for eigenvalue and exponent
bookkeeping are supported.  A negative ``square`` encodes an imaginary
radical, so complex-conjugate pairs stay exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Surd:
    """The number ``rational + sign * sqrt(square)``.

    Canonical form: ``sign`` and ``square`` are both zero when the radical
    part vanishes, so dataclass equality is exact numerical equality for
    surds sharing a radicand.
    """

    rational: Fraction
    square: Fraction = Fraction(0)
    sign: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "square", Fraction(self.square))
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if self.square == 0 or self.sign == 0:
            object.__setattr__(self, "square", Fraction(0))
            object.__setattr__(self, "sign", 0)

    @classmethod
    def sqrt(cls, square) -> "Surd":
        return cls(Fraction(0), Fraction(square), 1)

    @property
    def is_real(self) -> bool:
        return self.square >= 0

    @property
    def is_rational(self) -> bool:
        if self.sign == 0:
            return True
        if self.square < 0:
            return False
        num, den = self.square.numerator, self.square.denominator
        return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den

    @property
    def real_part(self) -> Fraction:
        """Exact real part; only defined when the radical is imaginary or absent."""
        if self.square > 0:
            raise ValueError("real part of a real irrational surd is not rational")
        return self.rational

    @property
    def imag_square(self) -> Fraction:
        """Square of the imaginary part (zero for real surds)."""
        return -self.square if self.square < 0 else Fraction(0)

    def conjugate(self) -> "Surd":
        return Surd(self.rational, self.square, -self.sign)

    def __complex__(self) -> complex:
        return complex(self.rational) + self.sign * cmath.sqrt(float(self.square))

    def __float__(self) -> float:
        if self.square < 0:
            raise TypeError("imaginary surd has no float value")
        return float(self.rational) + self.sign * math.sqrt(self.square)

    def __neg__(self) -> "Surd":
        return Surd(-self.rational, self.square, -self.sign)

    def __add__(self, other):
        if isinstance(other, Rational):
            return Surd(self.rational + other, self.square, self.sign)
        if not isinstance(other, Surd):
            return NotImplemented
        if other.sign == 0:
            return self + other.rational
        if self.sign == 0:
            return other + self.rational
        if self.square != other.square:
            raise ValueError("cannot add surds with different radicands")
        total = self.rational + other.rational
        if self.sign == other.sign:
            return Surd(total, 4 * self.square, self.sign)
        return Surd(total)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Rational, Surd)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Rational):
            return NotImplemented
        c = Fraction(other)
        return Surd(self.rational * c, self.square * c * c, self.sign * _sgn(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Rational):
            return NotImplemented
        return self * (1 / Fraction(other))

    def __str__(self) -> str:
        if self.sign == 0:
            return str(self.rational)
        op = "+" if self.sign > 0 else "-"
        return f"{self.rational} {op} sqrt({self.square})"


def conjugate_pair(center, disc_quarter) -> tuple[Surd, Surd]:
    """Roots ``center +/- sqrt(disc_quarter)``, the ``+`` root first."""
    root = Surd(center, disc_quarter, 1)
    return root, root.conjugate()
