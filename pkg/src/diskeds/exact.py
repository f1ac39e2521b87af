"""Exact scalar arithmetic: rationals and Gaussian rationals.

Plain rationals are ``fractions.Fraction`` (already canonical: positive
denominator, reduced).  Complexified coefficients are ``GaussianRational``
pairs of Fractions.  Scalars interoperate: every operation accepts int,
Fraction or GaussianRational on either side, and values with zero imaginary
part normalize back down to Fraction so term dictionaries stay canonical.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotRealCoefficients, SchemaViolation

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(\s*/\s*\d+)?$")


def rat(value) -> Fraction:
    """Parse an exact rational from an int or a 'p/q' / 'p' string.

    Decimal strings are rejected: '0.5' is not an exact input.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not _RATIONAL_RE.match(s):
            raise SchemaViolation(f"not an exact rational: {value!r}")
        try:
            return Fraction(s)
        except ZeroDivisionError as exc:
            raise SchemaViolation(f"zero denominator: {value!r}") from exc
    raise SchemaViolation(f"not an exact rational: {value!r} (floats are rejected)")


def rat_str(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = GaussianRational(1, 0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out


I_UNIT = GaussianRational(Fraction(0), Fraction(1))


def _lift(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(Fraction(value), Fraction(0))
    return NotImplemented


def normalize_scalar(value):
    """Canonical coefficient form: Fractions for real values."""
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return value.re
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    raise TypeError(f"unsupported scalar {value!r}")


def scalar_conj(value):
    if isinstance(value, GaussianRational):
        return normalize_scalar(value.conjugate())
    return value


def scalar_re(value) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.re
    return Fraction(value)


def scalar_im(value) -> Fraction:
    if isinstance(value, GaussianRational):
        return value.im
    return Fraction(0)


def require_real(value) -> Fraction:
    if isinstance(value, GaussianRational):
        if value.im != 0:
            raise NotRealCoefficients(f"value {value} has nonzero imaginary part")
        return value.re
    return Fraction(value)


def gaussian(re, im=0) -> GaussianRational:
    return GaussianRational(rat(re), rat(im))


def scalar_str(value) -> str:
    """Grammar-compatible rendering; complex values use the literal 'i'."""
    value = normalize_scalar(value)
    if isinstance(value, Fraction):
        return str(value)
    re, im = value.re, value.im
    im_part = "i" if im == 1 else ("-i" if im == -1 else f"{im}*i")
    if re == 0:
        return im_part
    sign = "+" if im > 0 else "-"
    mag = im_part.lstrip("-")
    return f"({re}{sign}{mag})"
