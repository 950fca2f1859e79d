"""Exact complex-rational scalars and the scalar serialization conventions.

The exact side of the package computes over the field Q(i): complex numbers
whose real and imaginary parts are arbitrary-precision rationals.  Real
rationals embed with a zero imaginary part, and floating-point data is
snapped to exact dyadic rationals (every binary64 value is a rational, so
the snap is lossless).

Serialization, reused by the CLI schemas:

* exact real rationals  -> ``"num/den"`` decimal-digit strings,
* exact complex values  -> a pair ``["re_num/re_den", "im_num/im_den"]``,
* complex floats        -> a pair of numbers ``[re, im]``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ProblemParseError

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ComplexRational:
    """A complex number with exact rational real and imaginary parts.

    Instances are immutable and hashable; all arithmetic is exact.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if isinstance(re, Fraction) else Fraction(re))
        object.__setattr__(self, "im", im if isinstance(im, Fraction) else Fraction(im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "ComplexRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ComplexRational is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_float(cls, x: float) -> "ComplexRational":
        """Exact (dyadic) rational equal to the binary64 value ``x``."""
        return cls._raw(Fraction(x), _ZERO)

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexRational":
        """Exact dyadic snap of a complex float."""
        return cls._raw(Fraction(float(z.real)), Fraction(float(z.imag)))

    @classmethod
    def coerce(cls, value) -> "ComplexRational":
        """Accept ints, Fractions, floats, complexes, strings, or ComplexRational."""
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw(Fraction(value), _ZERO)
        if isinstance(value, float):
            return cls.from_float(value)
        if isinstance(value, complex):
            return cls.from_complex(value)
        if isinstance(value, str):
            return cls._raw(Fraction(value), _ZERO)
        raise TypeError(f"cannot coerce {value!r} to ComplexRational")

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRational._raw(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ComplexRational._raw(a * c, _ZERO)
        return ComplexRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero ComplexRational")
            return ComplexRational._raw(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return ComplexRational._raw((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return ComplexRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        other = _as_cr(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    # -- queries ------------------------------------------------------

    def conjugate(self) -> "ComplexRational":
        return ComplexRational._raw(self.re, -self.im)

    def is_real(self) -> bool:
        return not self.im

    def abs2(self) -> Fraction:
        """Exact squared modulus, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ComplexRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}j)"


def _as_cr(value):
    if isinstance(value, ComplexRational):
        return value
    if isinstance(value, (int, Fraction)):
        return ComplexRational._raw(Fraction(value), _ZERO)
    return NotImplemented


CR_ZERO = ComplexRational._raw(_ZERO, _ZERO)
CR_ONE = ComplexRational._raw(_ONE, _ZERO)


def format_scalar(value) -> object:
    """Serialize a scalar following the package-wide conventions."""
    if isinstance(value, ComplexRational):
        if value.is_real():
            return _format_fraction(value.re)
        return [_format_fraction(value.re), _format_fraction(value.im)]
    if isinstance(value, (int, Fraction)):
        return _format_fraction(Fraction(value))
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float):
        return [value, 0.0]
    raise TypeError(f"cannot serialize scalar {value!r}")


def _format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(raw, kind: str):
    """Parse a serialized scalar.

    ``kind`` selects the target representation: ``"exact"`` produces a
    ComplexRational (numbers are snapped dyadically), ``"float"`` a complex.
    """
    if kind not in ("exact", "float"):
        raise ValueError(f"unknown scalar kind {kind!r}")
    if isinstance(raw, str):
        try:
            q = Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ProblemParseError(f"bad rational literal {raw!r}") from exc
        return ComplexRational(q) if kind == "exact" else complex(float(q), 0.0)
    if isinstance(raw, bool):
        raise ProblemParseError(f"bad scalar literal {raw!r}")
    if isinstance(raw, (int, float)):
        if kind == "exact":
            return ComplexRational.coerce(raw)
        return complex(float(raw), 0.0)
    if isinstance(raw, (list, tuple)) and len(raw) == 2:
        re, im = (parse_scalar(part, kind) for part in raw)
        if kind == "exact":
            return ComplexRational._raw(re.re, im.re) if im.is_real() and re.is_real() \
                else _reject_nested(raw)
        return complex(re.real, im.real)
    raise ProblemParseError(f"bad scalar literal {raw!r}")


def _reject_nested(raw):
    raise ProblemParseError(f"bad scalar literal {raw!r}")
