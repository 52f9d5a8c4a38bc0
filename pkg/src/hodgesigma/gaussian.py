"""Exact scalars in Q(i) and the lattice Z(1-i) + Z(1+i)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

from .errors import NotInLattice

Scalar = Union["GaussianRational", int, Fraction]


class GaussianRational:
    """An element ``re + im*i`` of Q(i), stored as ``(a + b*i) / d``.

    The triple is kept normalized (``d > 0``, ``gcd(a, b, d) == 1``) so equality
    and hashing are plain tuple operations.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0):
        re = Fraction(re)
        im = Fraction(im)
        dr, di = re.denominator, im.denominator
        d = dr * di // gcd(dr, di)
        self._a = re.numerator * (d // dr)
        self._b = im.numerator * (d // di)
        self._d = d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    @classmethod
    def coerce(cls, x: Scalar | complex) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def triple(self) -> tuple[int, int, int]:
        return self._a, self._b, self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self._a, -self._b, self._d)

    def l1(self) -> Fraction:
        """|re| + |im|, the rational stand-in for the modulus."""
        return Fraction(abs(self._a) + abs(self._b), self._d)

    def norm(self) -> Fraction:
        """Squared modulus re^2 + im^2."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        if d1 == d2:
            return GaussianRational._raw(a1 + a2, b1 + b2, d1)
        return GaussianRational._raw(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        if d1 == d2:
            return GaussianRational._raw(a1 - a2, b1 - b2, d1)
        return GaussianRational._raw(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        a1, b1, d1 = self._a, self._b, self._d
        a2, b2, d2 = other._a, other._b, other._d
        return GaussianRational._raw(a1 * a2 - b1 * b2, a1 * b2 + a2 * b1, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            if isinstance(other, (int, Fraction)):
                other = GaussianRational(other)
            else:
                return NotImplemented
        a2, b2, d2 = other._a, other._b, other._d
        n2 = a2 * a2 + b2 * b2
        if n2 == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        a1, b1, d1 = self._a, self._b, self._d
        # (a1 + b1 i)/d1 * d2 (a2 - b2 i) / n2
        return GaussianRational._raw((a1 * a2 + b1 * b2) * d2, (b1 * a2 - a1 * b2) * d2, d1 * n2)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (ONE / self) ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison / hashing

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return not self.is_zero()

    # text

    def __repr__(self):
        return f"GaussianRational('{self.re}', '{self.im}')"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return f"{_imag_str(im)}"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{_imag_str(abs(im))}"


def _imag_str(im: Fraction) -> str:
    if im == 1:
        return "i"
    if im == -1:
        return "-i"
    return f"{im}i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gr(re: int | Fraction | str = 0, im: int | Fraction | str = 0) -> GaussianRational:
    """Shorthand constructor used throughout the tests and generators."""
    return GaussianRational(re, im)


class LatticeIndex(NamedTuple):
    """Index (p, q) of the lattice point p*(1-i) + q*(1+i)."""

    p: int
    q: int

    @property
    def weight(self) -> int:
        return self.p + self.q

    def swapped(self) -> LatticeIndex:
        return LatticeIndex(self.q, self.p)


def lattice_embed(idx: tuple[int, int]) -> GaussianRational:
    """Return p*(1-i) + q*(1+i) = (p+q) + (q-p)i."""
    p, q = idx
    return GaussianRational._raw(p + q, q - p, 1)


def lattice_decode(g: GaussianRational) -> LatticeIndex:
    """Inverse of :func:`lattice_embed`.

    Raises:
        NotInLattice: if ``g`` is not a Gaussian integer with even coordinate sum.
    """
    a, b, d = g.triple
    if d != 1 or (a + b) % 2:
        raise NotInLattice(f"{g} is not in Z(1-i)+Z(1+i)")
    return LatticeIndex((a - b) // 2, (a + b) // 2)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``; whitespace and a unicode minus are tolerated."""
    cleaned = text.strip().replace("−", "-").replace(" ", "")
    if not cleaned:
        raise ValueError("empty rational")
    return Fraction(cleaned)
