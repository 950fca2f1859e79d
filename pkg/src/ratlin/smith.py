"""Exact structural oracle: Smith forms and local invariant orders.

For a polynomial matrix the Smith form is computed by exact elementary
operations with minimal-degree pivoting (ties broken row-major), which keeps
the procedure deterministic and the degree growth tame.  A rational matrix
R is written as N/d with d the monic lcm of the reduced entry denominators;
its invariant orders at a point x0 are mult_x0(s_i(N)) - mult_x0(d), giving
pole multiplicities (negative orders) and zero multiplicities (positive
orders) at every point, including infinity through g-reversal.

Root finding never leaves exact arithmetic: numeric root estimates are only
used as candidates, and a candidate counts as a root solely when the exact
evaluation vanishes.  Whatever part of a factor has no certified root is
carried along symbolically rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import RootsNotRational
from .matrices import PolyMatrix, RatMatrix, _pivot_search
from .polynomials import Poly, RatFun
from .scalars import ComplexRational, format_scalar


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


@dataclass(frozen=True)
class LocalStructure:
    """Invariant orders of a rational matrix at one point (or at infinity)."""

    point: object
    orders: tuple
    normal_rank: int
    grade: int | None = None

    def __post_init__(self):
        if list(self.orders) != sorted(self.orders):
            raise ValueError("orders must be nondecreasing")
        if len(self.orders) != self.normal_rank:
            raise ValueError("need one order per normal-rank direction")
        if self.grade is not None and self.point is not INFINITY:
            raise ValueError("grade only applies at infinity")

    @property
    def pole_multiplicities(self):
        """Positive pole multiplicities, largest first."""
        return tuple(-o for o in self.orders if o < 0)

    @property
    def zero_multiplicities(self):
        """Positive zero multiplicities, smallest first."""
        return tuple(o for o in self.orders if o > 0)

    def is_trivial(self) -> bool:
        return all(o == 0 for o in self.orders)


@dataclass(frozen=True)
class PoleZeroReport:
    """Pole/zero partial multiplicities over a finite list of points."""

    entries: tuple
    residual_factors: tuple = ()

    def poles(self):
        return {
            st.point: st.pole_multiplicities
            for st in self.entries
            if st.pole_multiplicities
        }

    def zeros(self):
        return {
            st.point: st.zero_multiplicities
            for st in self.entries
            if st.zero_multiplicities
        }

    def to_jsonable(self):
        out = []
        for st in self.entries:
            out.append(
                {
                    "point": "infinity" if st.point is INFINITY else format_scalar(st.point),
                    "pole_multiplicities": list(st.pole_multiplicities),
                    "zero_multiplicities": list(st.zero_multiplicities),
                }
            )
        doc = {"points": out}
        if self.residual_factors:
            doc["symbolic_factors"] = [str(p) for p in self.residual_factors]
        return doc


def multiplicity_at(p: Poly, x0) -> int:
    """Multiplicity of x0 as a root of p (0 if p(x0) != 0; p must be nonzero)."""
    if p.is_zero:
        raise ValueError("multiplicity of a root of the zero polynomial")
    x0 = ComplexRational.coerce(x0)
    lin = Poly.x() - Poly.constant(x0)
    mult = 0
    while not p.eval(x0):
        p = p // lin
        mult += 1
        if p.is_zero:
            break
    return mult


def strip_points(p: Poly, points) -> Poly:
    """Divide out every factor (x - x0), x0 in points, to full multiplicity."""
    for x0 in points:
        x0 = ComplexRational.coerce(x0)
        lin = Poly.x() - Poly.constant(x0)
        while not p.is_zero and not p.eval(x0) and p.degree() >= 1:
            p = p // lin
    return p


def smith_invariant_factors(P: PolyMatrix) -> list:
    """Monic invariant factors s_1 | s_2 | ... | s_r of an exact PolyMatrix."""
    if P.kind != "exact":
        raise TypeError("smith form requires exact kind")
    m = [list(row) for row in P.entries]
    rows, cols = P.rows, P.cols
    factors = []
    for k in range(min(rows, cols)):
        pos = _pivot_search(m, k)
        if pos is None:
            break
        i, j = pos
        if i != k:
            m[k], m[i] = m[i], m[k]
        if j != k:
            for row in m:
                row[k], row[j] = row[j], row[k]
        while True:
            # clear column k; a nonzero remainder means a lower-degree pivot
            restarted = False
            for i in range(k + 1, rows):
                if m[i][k].is_zero:
                    continue
                q, r = m[i][k].divmod(m[k][k])
                if not q.is_zero:
                    m[i] = [a - q * b for a, b in zip(m[i], m[k])]
                if not r.is_zero:
                    m[k], m[i] = m[i], m[k]
                    restarted = True
                    break
            if restarted:
                continue
            for j in range(k + 1, cols):
                if m[k][j].is_zero:
                    continue
                q, r = m[k][j].divmod(m[k][k])
                if not q.is_zero:
                    for row in m:
                        row[j] = row[j] - q * row[k]
                if not r.is_zero:
                    for row in m:
                        row[k], row[j] = row[j], row[k]
                    restarted = True
                    break
            if restarted:
                continue
            # pivot must divide the whole trailing submatrix
            offender = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if m[i][j].is_zero:
                        continue
                    if not m[k][k].divides(m[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            m[k] = [a + b for a, b in zip(m[k], m[offender])]
        factors.append(m[k][k].monic())
    return factors


def _smith_data(R: RatMatrix):
    N, d = R.clear_denominators()
    return smith_invariant_factors(N), d


def local_orders(R: RatMatrix, x0) -> LocalStructure:
    """Invariant orders of R at the finite point x0, sorted nondecreasing."""
    s, d = _smith_data(R)
    return _orders_from_chain(s, d, x0)


def _orders_from_chain(s, d: Poly, x0) -> LocalStructure:
    md = multiplicity_at(d, x0)
    orders = sorted(multiplicity_at(si, x0) - md for si in s)
    return LocalStructure(
        point=ComplexRational.coerce(x0), orders=tuple(orders), normal_rank=len(s)
    )


def orders_at_infinity(R: RatMatrix, g: int) -> LocalStructure:
    """Invariant orders of R at infinity relative to grade g (via rev_g at 0)."""
    st = local_orders(R.reverse(g), 0)
    return LocalStructure(
        point=INFINITY, orders=st.orders, normal_rank=st.normal_rank, grade=g
    )


def pole_zero_in(R: RatMatrix, points) -> PoleZeroReport:
    """Split invariant orders at each point into pole and zero multiplicities."""
    s, d = _smith_data(R)
    entries = tuple(_orders_from_chain(s, d, x0) for x0 in points)
    return PoleZeroReport(entries=entries)


def candidate_points(R: RatMatrix) -> list:
    """Finite points where R can have nonzero invariant orders.

    These are the roots of the denominator lcm d and of the largest
    invariant factor of the numerator matrix.  Raises RootsNotRational when
    a factor keeps a nonconstant part with no exactly-certified root; the
    exception carries both the certified points and the leftover factors.
    """
    points, residuals = candidate_points_with_residuals(R)
    if residuals:
        raise RootsNotRational(points, residuals)
    return points


def candidate_points_with_residuals(R: RatMatrix):
    s, d = _smith_data(R)
    targets = [d]
    if s:
        targets.append(s[-1])
    points = set()
    residuals = []
    for t in targets:
        roots, resid = exact_linear_roots(t)
        points.update(r for r, _mult in roots)
        if not resid.is_constant():
            residuals.append(resid)
    return sorted(points, key=_point_sort_key), residuals


def _point_sort_key(x: ComplexRational):
    return (x.re, x.im)


def exact_linear_roots(p: Poly):
    """All exactly-certified roots of p with multiplicities, plus the leftover.

    Returns ``(roots, residual)`` where ``roots`` is a list of
    ``(ComplexRational, multiplicity)`` pairs and ``residual`` is the monic
    factor with no certified root (constant 1 when p splits completely).
    Candidates come from numeric root estimates snapped to nearby rationals;
    only exact vanishing counts.
    """
    if p.kind != "exact":
        raise TypeError("exact_linear_roots requires exact kind")
    if p.is_zero:
        raise ValueError("roots of the zero polynomial")
    residual = p.monic()
    roots = []
    x = Poly.x()
    while residual.degree() >= 1:
        if residual.degree() == 1:
            c0, c1 = residual.coeffs
            root = -c0 / c1
            roots.append(root)
            residual = Poly.one()
            break
        found = None
        for cand in _root_candidates(residual):
            if not residual.eval(cand):
                found = cand
                break
        if found is None:
            break
        lin = x - Poly.constant(found)
        while not residual.eval(found) and residual.degree() >= 1:
            residual = (residual // lin).monic()
            roots.append(found)
    counted = {}
    for r in roots:
        counted[r] = counted.get(r, 0) + 1
    ordered = sorted(counted.items(), key=lambda kv: _point_sort_key(kv[0]))
    return [(r, m) for r, m in ordered], residual.monic()


_SNAP_DENOMS = (1, 6, 60, 2520, 10**6, 10**9, 10**12)


def _root_candidates(p: Poly):
    coeffs = [c.to_complex() for c in p.coeffs]
    numeric = np.roots(list(reversed(coeffs)))
    seen = set()
    for z in numeric:
        for cand in _snap_candidates(complex(z)):
            if cand not in seen:
                seen.add(cand)
                yield cand


def _snap_candidates(z: complex):
    for d in _SNAP_DENOMS:
        re = Fraction(z.real).limit_denominator(d)
        im = Fraction(z.imag).limit_denominator(d)
        yield ComplexRational(re, im)
    yield ComplexRational.from_complex(z)
