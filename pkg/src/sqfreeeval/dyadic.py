"""Exact dyadic rationals ``m * 2**e``.

Python integers are already arbitrary precision, so they serve as the
mantissa type directly. A :class:`Dyadic` is kept in canonical form: the
mantissa is odd, or the value is zero with exponent 0. Two values are
therefore equal exactly when their ``(mantissa, exponent)`` pairs are.
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = [
    "Dyadic",
    "ExponentOverflowError",
    "dyadic_add",
    "dyadic_mul",
    "dyadic_compare_abs",
    "parse_dyadic",
]

# Signed 64-bit exponent range.
EXP_MIN = -(2**63)
EXP_MAX = 2**63 - 1

_TEXT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:\*\s*2\s*\^\s*\(?\s*([+-]?\d+)\s*\)?)?\s*$")


class ExponentOverflowError(OverflowError):
    """A dyadic exponent left the signed 64-bit range."""


def _canonical(m: int, e: int) -> tuple[int, int]:
    if m == 0:
        return 0, 0
    tz = (m & -m).bit_length() - 1
    if tz:
        m >>= tz
        e += tz
    if not EXP_MIN <= e <= EXP_MAX:
        raise ExponentOverflowError(f"exponent {e} out of range")
    return m, e


class Dyadic:
    """Immutable exact value ``mantissa * 2**exponent``."""

    __slots__ = ("_m", "_e")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        if not isinstance(mantissa, int) or not isinstance(exponent, int):
            raise TypeError("mantissa and exponent must be int")
        self._m, self._e = _canonical(mantissa, exponent)

    @classmethod
    def _raw(cls, m: int, e: int) -> Dyadic:
        obj = object.__new__(cls)
        obj._m, obj._e = _canonical(m, e)
        return obj

    @classmethod
    def coerce(cls, value) -> Dyadic:
        """Convert an int, Dyadic, dyadic Fraction or text form to Dyadic."""
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a dyadic value")
        if isinstance(value, int):
            return cls._raw(value, 0)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} is not dyadic")
            return cls._raw(value.numerator, -(den.bit_length() - 1))
        if isinstance(value, str):
            return parse_dyadic(value)
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    @property
    def mantissa(self) -> int:
        return self._m

    @property
    def exponent(self) -> int:
        return self._e

    def sign(self) -> int:
        return (self._m > 0) - (self._m < 0)

    def is_zero(self) -> bool:
        return self._m == 0

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int) and not isinstance(other, bool):
                other = Dyadic._raw(other, 0)
            else:
                return NotImplemented
        if self._m == 0:
            return other
        if other._m == 0:
            return self
        e1, e2 = self._e, other._e
        if e1 <= e2:
            return Dyadic._raw(self._m + (other._m << (e2 - e1)), e1)
        return Dyadic._raw((self._m << (e1 - e2)) + other._m, e2)

    __radd__ = __add__

    def __neg__(self) -> Dyadic:
        obj = object.__new__(Dyadic)
        obj._m, obj._e = -self._m, self._e
        return obj

    def __pos__(self) -> Dyadic:
        return self

    def __abs__(self) -> Dyadic:
        return self if self._m >= 0 else -self

    def __sub__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Dyadic._raw(other, 0)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return Dyadic._raw(other, 0) - self
        return NotImplemented

    def __mul__(self, other):
        if not isinstance(other, Dyadic):
            if isinstance(other, int) and not isinstance(other, bool):
                other = Dyadic._raw(other, 0)
            else:
                return NotImplemented
        return Dyadic._raw(self._m * other._m, self._e + other._e)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Dyadic:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are exact")
        return Dyadic._raw(self._m**n, self._e * n)

    def scale2(self, k: int) -> Dyadic:
        """Return ``self * 2**k``; halving is ``scale2(-1)``."""
        return Dyadic._raw(self._m, self._e + k) if self._m else self

    def half(self) -> Dyadic:
        return self.scale2(-1)

    # comparison

    def _cmp(self, other: Dyadic) -> int:
        diff = (self - other)._m
        return (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self._m == other._m and self._e == other._e
        if isinstance(other, int) and not isinstance(other, bool):
            return self._e == 0 and self._m == other if other else self._m == 0
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self._e >= 0:
            return hash(self._m << self._e)
        return hash(self.to_fraction())

    def __lt__(self, other):
        other = _operand(other)
        return NotImplemented if other is None else self._cmp(other) < 0

    def __le__(self, other):
        other = _operand(other)
        return NotImplemented if other is None else self._cmp(other) <= 0

    def __gt__(self, other):
        other = _operand(other)
        return NotImplemented if other is None else self._cmp(other) > 0

    def __ge__(self, other):
        other = _operand(other)
        return NotImplemented if other is None else self._cmp(other) >= 0

    def __bool__(self):
        return self._m != 0

    # conversion

    def to_fraction(self) -> Fraction:
        if self._e >= 0:
            return Fraction(self._m << self._e)
        return Fraction(self._m, 1 << -self._e)

    def __float__(self) -> float:
        if self._e >= 0:
            return float(self._m << self._e)
        # Fraction handles huge mantissas without intermediate overflow.
        return float(self.to_fraction())

    def __int__(self) -> int:
        if self._e >= 0:
            return self._m << self._e
        return int(self.to_fraction())

    def __str__(self) -> str:
        if self._e == 0:
            return str(self._m)
        return f"{self._m}*2^{self._e}"

    def __repr__(self) -> str:
        return f"Dyadic({self._m}, {self._e})"

    def __reduce__(self):
        return (Dyadic, (self._m, self._e))


def _operand(other) -> Dyadic | None:
    if isinstance(other, Dyadic):
        return other
    if isinstance(other, int) and not isinstance(other, bool):
        return Dyadic._raw(other, 0)
    return None


def dyadic_add(a: Dyadic, b: Dyadic) -> Dyadic:
    return a + b


def dyadic_mul(a: Dyadic, b: Dyadic) -> Dyadic:
    return a * b


def dyadic_compare_abs(a: Dyadic, b: Dyadic) -> int:
    """Three-way comparison of ``|a|`` and ``|b|``: -1, 0 or +1."""
    ma, mb = abs(a.mantissa), abs(b.mantissa)
    if ma == 0 or mb == 0:
        return (ma > 0) - (mb > 0)
    ea, eb = a.exponent, b.exponent
    # cross-scale mantissas to a common exponent
    if ea >= eb:
        ma <<= ea - eb
    else:
        mb <<= eb - ea
    return (ma > mb) - (ma < mb)


def parse_dyadic(text: str) -> Dyadic:
    """Parse ``m*2^e`` (e.g. ``3*2^-2``) or a plain decimal integer."""
    match = _TEXT_RE.match(text)
    if not match:
        raise ValueError(f"not a dyadic literal: {text!r}")
    m = int(match.group(1))
    e = int(match.group(2)) if match.group(2) is not None else 0
    return Dyadic(m, e)
