"""Exact arithmetic in the 2-local integers Z_(2).

Every coefficient that appears in the engine is a rational number whose
reduced denominator is odd.  :class:`Local2Rational` enforces that and
carries the 2-adic valuation used by the mod-2 and Smith-normal-form code.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction

__all__ = ["NotTwoLocal", "Local2Rational", "normalize", "val2", "odd_unit_part"]


class NotTwoLocal(ArithmeticError):
    """A reduced denominator turned out to be even."""


def _v2_int(n: int) -> int:
    return (n & -n).bit_length() - 1


class Local2Rational:
    """Immutable element of Z_(2): ``num/den`` with ``den`` odd and positive."""

    __slots__ = ("_num", "_den")

    def __init__(self, num: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        g = math.gcd(num, den)
        num, den = num // g, den // g
        if den < 0:
            num, den = -num, -den
        if den % 2 == 0:
            raise NotTwoLocal(f"{num}/{den} is not in Z_(2)")
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Local2Rational is immutable")

    @classmethod
    def coerce(cls, x) -> "Local2Rational":
        if isinstance(x, Local2Rational):
            return x
        if isinstance(x, int):
            return cls(x, 1)
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        raise TypeError(f"cannot coerce {x!r} to Local2Rational")

    @property
    def numerator(self) -> int:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def to_fraction(self) -> Fraction:
        return Fraction(self._num, self._den)

    # ring operations

    def __add__(self, other):
        try:
            o = Local2Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return Local2Rational(self._num * o._den + o._num * self._den, self._den * o._den)

    __radd__ = __add__

    def __neg__(self):
        return Local2Rational(-self._num, self._den)

    def __sub__(self, other):
        try:
            o = Local2Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Local2Rational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = Local2Rational.coerce(other)
        except TypeError:
            return NotImplemented
        return Local2Rational(self._num * o._num, self._den * o._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = Local2Rational.coerce(other)
        if o._num == 0:
            raise ZeroDivisionError("division by zero")
        return Local2Rational(self._num * o._den, self._den * o._num)

    def is_unit(self) -> bool:
        return self._num % 2 == 1

    def inverse(self) -> "Local2Rational":
        if not self.is_unit():
            raise NotTwoLocal(f"{self} is not a unit of Z_(2)")
        return Local2Rational(self._den, self._num)

    def mod2(self) -> int:
        """Image in Z/2 (the denominator is odd, so only the numerator matters)."""
        return self._num & 1

    def mod_power_of_two(self, k: int) -> int:
        m = 1 << k
        return (self._num * pow(self._den, -1, m)) % m

    def __bool__(self):
        return self._num != 0

    def __eq__(self, other):
        if isinstance(other, Local2Rational):
            return self._num == other._num and self._den == other._den
        if isinstance(other, int):
            return self._den == 1 and self._num == other
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash((self._num, self._den))

    def __repr__(self):
        return f"Local2Rational({self._num}, {self._den})"

    def __str__(self):
        if self._den == 1:
            return str(self._num)
        return f"{self._num}/{self._den}"

    _TEXT = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")

    @classmethod
    def parse(cls, text: str) -> "Local2Rational":
        m = cls._TEXT.match(text)
        if not m:
            raise ValueError(f"not a rational: {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 1))


ZERO = Local2Rational(0)
ONE = Local2Rational(1)


def normalize(n: int, d: int) -> Local2Rational:
    return Local2Rational(n, d)


def val2(q) -> float | int:
    """2-adic valuation; ``math.inf`` for zero."""
    q = Local2Rational.coerce(q)
    if q.numerator == 0:
        return math.inf
    return _v2_int(q.numerator)


def odd_unit_part(q) -> Local2Rational:
    """The odd unit ``u`` with ``q = 2**val2(q) * u`` (zero maps to zero).

    Smith normal form over Z_(2) only sees the valuation; this is the part
    it is allowed to discard.
    """
    q = Local2Rational.coerce(q)
    if q.numerator == 0:
        return ZERO
    return Local2Rational(q.numerator >> _v2_int(q.numerator), q.denominator)
