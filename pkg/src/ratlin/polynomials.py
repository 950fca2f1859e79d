"""Univariate polynomials and reduced rational functions.

Both come in two scalar kinds: ``"exact"`` (coefficients are
:class:`~ratlin.scalars.ComplexRational`, all operations exact) and
``"float"`` (complex doubles, used by the numeric pipeline).  Coefficients
are stored lowest degree first with no trailing zeros; the zero polynomial
has an empty coefficient tuple and its degree is the sentinel
``MINUS_INF`` (``float("-inf")``), never an integer.

Exact gcds use a fraction-free subresultant remainder sequence over the
Gaussian integers, which keeps intermediate coefficients from exploding the
way naive rational Euclid does.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NotDefinedAt, ZeroDenominator
from .scalars import CR_ONE, CR_ZERO, ComplexRational

MINUS_INF = float("-inf")


class Poly:
    """Dense univariate polynomial, lowest degree coefficient first."""

    __slots__ = ("coeffs", "kind")

    def __init__(self, coeffs, kind="exact"):
        if kind not in ("exact", "float"):
            raise ValueError(f"unknown scalar kind {kind!r}")
        if kind == "exact":
            cs = [c if isinstance(c, ComplexRational) else ComplexRational.coerce(c)
                  for c in coeffs]
            while cs and not cs[-1]:
                cs.pop()
        else:
            cs = [complex(c) for c in coeffs]
            while cs and cs[-1] == 0:
                cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, kind="exact"):
        return cls((), kind)

    @classmethod
    def one(cls, kind="exact"):
        return cls((CR_ONE,) if kind == "exact" else (1.0,), kind)

    @classmethod
    def constant(cls, value, kind="exact"):
        return cls((value,), kind)

    @classmethod
    def x(cls, kind="exact"):
        """The identity polynomial (the indeterminate itself)."""
        if kind == "exact":
            return cls((CR_ZERO, CR_ONE), kind)
        return cls((0.0, 1.0), kind)

    @classmethod
    def from_roots(cls, roots, kind="exact"):
        p = cls.one(kind)
        x = cls.x(kind)
        for r in roots:
            p = p * (x - cls.constant(r, kind))
        return p

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self):
        """Degree as an int, or MINUS_INF for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INF

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coefficient(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return CR_ZERO if self.kind == "exact" else 0.0

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Poly"):
        if self.kind != other.kind:
            raise TypeError("mixed scalar kinds")

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out, self.kind)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs), self.kind)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ComplexRational, float, complex)):
            other = Poly.constant(other, self.kind)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.kind)
        zero = CR_ZERO if self.kind == "exact" else 0.0
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out, self.kind)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.one(self.kind)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.kind == other.kind and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.kind, self.coeffs))

    def shifted(self, k: int) -> "Poly":
        """Multiply by x**k (k >= 0)."""
        if self.is_zero or k == 0:
            return self
        zero = CR_ZERO if self.kind == "exact" else 0.0
        return Poly((zero,) * k + self.coeffs, self.kind)

    def divmod(self, other: "Poly"):
        """Exact-field polynomial division with remainder."""
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.kind != "exact":
            raise TypeError("divmod requires exact kind")
        rem = list(self.coeffs)
        div = other.coeffs
        dq = len(rem) - len(div)
        if dq < 0:
            return Poly.zero(self.kind), self
        quo = [CR_ZERO] * (dq + 1)
        lead = div[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(div) - 1] / lead
            quo[k] = c
            if c:
                for j, dj in enumerate(div):
                    rem[k + j] = rem[k + j] - c * dj
        return Poly(quo, self.kind), Poly(rem[: len(div) - 1], self.kind)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other: "Poly") -> bool:
        if self.is_zero:
            return other.is_zero
        return other.divmod(self)[1].is_zero

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        lead = self.leading()
        if self.kind == "exact":
            if lead == CR_ONE:
                return self
        elif lead == 1.0:
            return self
        return Poly(tuple(c / lead for c in self.coeffs), self.kind)

    # -- evaluation and reversal ----------------------------------------

    def eval(self, x):
        """Horner evaluation; the scalar kind of ``x`` must match."""
        if self.kind == "exact":
            acc = CR_ZERO
            x = ComplexRational.coerce(x)
        else:
            acc = 0.0 + 0.0j
            x = complex(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        return self.eval(x)

    def reversed_coeffs(self) -> "Poly":
        """x**deg * p(1/x) for nonzero p: the coefficient list reversed."""
        return Poly(tuple(reversed(self.coeffs)), self.kind)

    def reverse(self, g: int) -> "RatFun":
        """The g-reversal x**g * p(1/x) as a reduced rational function."""
        if self.is_zero:
            return RatFun(self, Poly.one(self.kind))
        rev = self.reversed_coeffs()
        e = g - (len(self.coeffs) - 1)
        if e >= 0:
            return RatFun(rev.shifted(e), Poly.one(self.kind))
        return RatFun(rev, Poly.one(self.kind).shifted(-e))

    def to_float(self) -> "Poly":
        if self.kind == "float":
            return self
        return Poly(tuple(c.to_complex() for c in self.coeffs), "float")

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r}, kind={self.kind!r})"

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return " + ".join(terms)


# ---------------------------------------------------------------------------
# Exact gcd via a subresultant remainder sequence over the Gaussian integers.
# Gaussian integers are (re, im) int pairs here to keep the inner loop on
# machine/long ints rather than Fractions.
# ---------------------------------------------------------------------------


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gi_norm(a):
    return a[0] * a[0] + a[1] * a[1]


def _gi_divmod(a, b):
    """Nearest-quotient division: remainder norm < divisor norm."""
    n = _gi_norm(b)
    pr = a[0] * b[0] + a[1] * b[1]
    pi = a[1] * b[0] - a[0] * b[1]
    qr = (2 * pr + n) // (2 * n)
    qi = (2 * pi + n) // (2 * n)
    q = (qr, qi)
    return q, _gi_sub(a, _gi_mul(q, b))


def _gi_gcd(a, b):
    while b != (0, 0):
        _, r = _gi_divmod(a, b)
        a, b = b, r
    return a


def _gi_exact_div(a, b):
    q, r = _gi_divmod(a, b)
    if r != (0, 0):
        raise ArithmeticError("inexact Gaussian division in subresultant sequence")
    return q


def _gi_pow(a, n):
    result = (1, 0)
    while n:
        if n & 1:
            result = _gi_mul(result, a)
        a = _gi_mul(a, a)
        n >>= 1
    return result


def _poly_to_gi(p: Poly):
    """Scale an exact Poly to Gaussian-integer coefficients."""
    denoms = []
    for c in p.coeffs:
        denoms.append(c.re.denominator)
        denoms.append(c.im.denominator)
    scale = 1
    for d in denoms:
        scale = scale * d // _int_gcd(scale, d)
    out = []
    for c in p.coeffs:
        re = c.re * scale
        im = c.im * scale
        out.append((int(re), int(im)))
    return out


def _int_gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _gi_trim(cs):
    while cs and cs[-1] == (0, 0):
        cs.pop()
    return cs


def _gi_content(cs):
    g = (0, 0)
    for c in cs:
        if c != (0, 0):
            g = c if g == (0, 0) else _gi_gcd(g, c)
    return g


def _gi_primitive(cs):
    g = _gi_content(cs)
    if g == (0, 0) or g == (1, 0):
        return list(cs)
    return [_gi_exact_div(c, g) for c in cs]


def _gi_prem(a, b):
    """Pseudo-remainder of a by b (lc(b)**(deg a - deg b + 1) * a mod b)."""
    a = _gi_trim(list(a))
    db = len(b) - 1
    lb = b[-1]
    scalings_left = (len(a) - 1) - db + 1
    while a and len(a) - 1 >= db:
        da = len(a) - 1
        la = a[-1]
        a = [_gi_mul(c, lb) for c in a]
        shift = da - db
        for j in range(db + 1):
            a[shift + j] = _gi_sub(a[shift + j], _gi_mul(la, b[j]))
        a = _gi_trim(a[:da])
        scalings_left -= 1
    if a and scalings_left > 0:
        s = _gi_pow(lb, scalings_left)
        a = [_gi_mul(c, s) for c in a]
    return a


def _gi_to_poly(cs) -> Poly:
    return Poly(
        tuple(ComplexRational(Fraction(re), Fraction(im)) for re, im in cs), "exact"
    )


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two exact polynomials (subresultant PRS)."""
    if a.kind != "exact" or b.kind != "exact":
        raise TypeError("poly_gcd requires exact kind")
    if a.is_zero:
        return b.monic()
    if b.is_zero:
        return a.monic()
    A = _gi_primitive(_gi_trim(_poly_to_gi(a)))
    B = _gi_primitive(_gi_trim(_poly_to_gi(b)))
    if len(A) < len(B):
        A, B = B, A
    g = (1, 0)
    h = (1, 0)
    while True:
        delta = (len(A) - 1) - (len(B) - 1)
        R = _gi_prem(A, B)
        if not R:
            return _gi_to_poly(_gi_primitive(B)).monic()
        if len(R) == 1:
            return Poly.one("exact")
        scale = _gi_mul(g, _gi_pow(h, delta))
        A, B = B, [_gi_exact_div(c, scale) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _gi_exact_div(_gi_pow(g, delta), _gi_pow(h, delta - 1))


def poly_lcm(a: Poly, b: Poly) -> Poly:
    """Monic lcm of two exact polynomials."""
    if a.is_zero or b.is_zero:
        return Poly.zero("exact")
    return ((a * b) // poly_gcd(a, b)).monic()


class RatFun:
    """A rational function num/den.

    In the exact kind the stored pair is always reduced (constant gcd) with a
    monic denominator; the float kind stores the pair verbatim.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if num.kind != den.kind:
            raise TypeError("mixed scalar kinds")
        if den.is_zero:
            raise ZeroDenominator("denominator is the zero polynomial")
        if num.kind == "exact":
            if num.is_zero:
                den = Poly.one("exact")
            else:
                g = poly_gcd(num, den)
                if g.degree() and g.degree() > 0:
                    num = num // g
                    den = den // g
                lead = den.leading()
                if lead != CR_ONE:
                    num = num * Poly.constant(CR_ONE / lead, "exact")
                    den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    @property
    def kind(self):
        return self.num.kind

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFun":
        return cls(p, Poly.one(p.kind))

    @classmethod
    def constant(cls, value, kind="exact") -> "RatFun":
        return cls.from_poly(Poly.constant(value, kind))

    @classmethod
    def zero(cls, kind="exact") -> "RatFun":
        return cls.from_poly(Poly.zero(kind))

    @classmethod
    def one(cls, kind="exact") -> "RatFun":
        return cls.from_poly(Poly.one(kind))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        if self.kind == "exact":
            return self.num  # den is monic, hence exactly 1
        c = self.den.coeffs[0]
        return self.num * Poly.constant(1.0 / c, "float")

    def degree(self):
        """deg(num) - deg(den); MINUS_INF for the zero function."""
        if self.num.is_zero:
            return MINUS_INF
        return self.num.degree() - self.den.degree()

    def __add__(self, other):
        other = _as_ratfun(other, self.kind)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfun(other, self.kind)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __mul__(self, other):
        other = _as_ratfun(other, self.kind)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other, self.kind)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfun(other, self.kind)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "exact":
            return self.num == other.num and self.den == other.den
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def eval(self, x):
        d = self.den.eval(x)
        if (not d) if self.kind == "exact" else (d == 0):
            raise NotDefinedAt(x)
        return self.num.eval(x) / d

    def __call__(self, x):
        return self.eval(x)

    def reverse(self, g: int) -> "RatFun":
        """The g-reversal x**g * r(1/x), reduced."""
        if self.is_zero:
            return self
        n_rev = self.num.reversed_coeffs()
        d_rev = self.den.reversed_coeffs()
        e = g + self.den.degree() - self.num.degree()
        if e >= 0:
            return RatFun(n_rev.shifted(e), d_rev)
        return RatFun(n_rev, d_rev.shifted(-e))

    def to_float(self) -> "RatFun":
        if self.kind == "float":
            return self
        return RatFun(self.num.to_float(), self.den.to_float())

    def __repr__(self):
        return f"RatFun({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


def _as_ratfun(value, kind):
    if isinstance(value, RatFun):
        if value.kind != kind:
            raise TypeError("mixed scalar kinds")
        return value
    if isinstance(value, Poly):
        if value.kind != kind:
            raise TypeError("mixed scalar kinds")
        return RatFun.from_poly(value)
    if isinstance(value, (int, Fraction, ComplexRational, float, complex)):
        return RatFun.constant(value, kind)
    return NotImplemented
