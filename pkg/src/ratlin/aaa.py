"""Barycentric rational approximation (AAA) and its exact rationalization.

The greedy loop follows the classic scheme: pick the sample point with the
worst residual as the next support, then choose the weights as a right
singular vector of the (stacked) Loewner matrix.  The set-valued variant
approximates several functions at once with shared supports and weights;
each function is scaled by its max sample magnitude so the residuals are
comparable.

Everything downstream that needs exactness (state pencils, the p/q
quotient, irreducibility) goes through a rationalization bridge: supports,
weights and values are snapped to exact dyadic complex rationals, so every
structural statement is an exact statement about the snapped approximant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSamples, DimensionMismatch, ToleranceNotReached
from .matrices import PolyMatrix, const_rank
from .polynomials import Poly, poly_gcd
from .scalars import CR_ONE, CR_ZERO, ComplexRational
from .smith import exact_linear_roots
from .sysmat import SystemMatrix

_WEIGHT_UNDERFLOW = 1e-300

BARYCENTRIC_POLE = complex(math.inf, math.inf)


@dataclass(frozen=True)
class SampleSet:
    """Sample points with one value row per approximated function."""

    points: np.ndarray
    values: np.ndarray
    names: tuple = ()

    def __post_init__(self):
        points = np.asarray(self.points, dtype=complex).ravel()
        values = np.atleast_2d(np.asarray(self.values, dtype=complex))
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "values", values)
        if values.shape[1] != points.shape[0]:
            raise DimensionMismatch("one value per sample point per function")
        if len(np.unique(points)) != len(points):
            raise DegenerateSamples("sample points must be distinct")
        if not np.all(np.isfinite(values)):
            raise DegenerateSamples("sample values must be finite")

    @classmethod
    def from_functions(cls, fns, points, names=()):
        points = np.asarray(points, dtype=complex).ravel()
        values = np.array([[fn(z) for z in points] for fn in fns], dtype=complex)
        return cls(points=points, values=values, names=tuple(names))

    @property
    def num_functions(self) -> int:
        return self.values.shape[0]


class BarycentricApprox:
    """A barycentric rational interpolant r with supports z_j, weights w_j.

    Supports are pairwise distinct and weights are nonzero; at a support the
    function takes the stored interpolation value.
    """

    __slots__ = ("supports", "weights", "values", "_rationalized")

    def __init__(self, supports, weights, values):
        supports = np.asarray(supports, dtype=complex).ravel()
        weights = np.asarray(weights, dtype=complex).ravel()
        values = np.asarray(values, dtype=complex).ravel()
        if not (len(supports) == len(weights) == len(values)):
            raise DimensionMismatch("supports, weights, values must align")
        if len(supports) == 0:
            raise DegenerateSamples("at least one support is required")
        if len(np.unique(supports)) != len(supports):
            raise DegenerateSamples("support points must be distinct")
        if np.any(np.abs(weights) < _WEIGHT_UNDERFLOW):
            raise DegenerateSamples("zero (underflowed) barycentric weight")
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_rationalized", None)

    def __setattr__(self, name, value):
        raise AttributeError("BarycentricApprox is immutable")

    @property
    def order(self) -> int:
        return len(self.supports)

    def rationalized(self):
        """Exact dyadic snapshots (supports, weights, values) as tuples."""
        cached = self._rationalized
        if cached is None:
            cached = (
                tuple(ComplexRational.from_complex(z) for z in self.supports),
                tuple(ComplexRational.from_complex(w) for w in self.weights),
                tuple(ComplexRational.from_complex(v) for v in self.values),
            )
            object.__setattr__(self, "_rationalized", cached)
        return cached

    def __repr__(self):
        return f"BarycentricApprox(m={self.order})"


def barycentric_eval(r: BarycentricApprox, lam: complex) -> complex:
    """Evaluate r at one point; supports return the stored interpolation value.

    A pole of the barycentric quotient returns the infinite marker
    ``BARYCENTRIC_POLE``.
    """
    lam = complex(lam)
    hits = np.nonzero(r.supports == lam)[0]
    if hits.size:
        return complex(r.values[hits[0]])
    c = 1.0 / (lam - r.supports)
    den = np.dot(c, r.weights)
    if den == 0:
        return BARYCENTRIC_POLE
    return complex(np.dot(c, r.weights * r.values) / den)


def _eval_on_grid(supports, weights, values, points):
    """Barycentric evaluation on a point array (supports must not be in it)."""
    c = 1.0 / (points[:, None] - supports[None, :])
    return (c @ (weights * values)) / (c @ weights)


def aaa_approximate(samples: SampleSet, tol: float, max_m: int) -> BarycentricApprox:
    """AAA approximation of a single function over its sample set.

    Stops when the max residual over the remaining sample points drops to
    ``tol`` times the max sample magnitude; raises ToleranceNotReached when
    ``max_m`` supports do not get there.
    """
    if samples.num_functions != 1:
        raise DimensionMismatch("aaa_approximate expects exactly one function")
    return set_valued_aaa(samples, tol, max_m)[0]


def set_valued_aaa(samples: SampleSet, tol: float, max_m: int):
    """Simultaneous AAA with shared supports and weights for all functions."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_m < 1:
        raise ValueError("max_m must be at least 1")
    points = samples.points
    fvals = samples.values
    s, npts = fvals.shape
    if npts < 2:
        raise DegenerateSamples("need at least two distinct sample points")
    scales = np.max(np.abs(fvals), axis=1)
    scales[scales == 0.0] = 1.0
    active = np.ones(npts, dtype=bool)
    approx_vals = np.tile(np.mean(fvals, axis=1)[:, None], (1, npts))
    support_idx: list[int] = []
    weights = None
    best_err = math.inf
    for _m in range(1, max_m + 1):
        resid = np.abs(fvals - approx_vals) / scales[:, None]
        resid[:, ~active] = 0.0
        per_point = resid.max(axis=0)
        j_star = int(np.argmax(per_point))  # ties resolve to the smallest index
        support_idx.append(j_star)
        active[j_star] = False
        zj = points[support_idx]
        fj = fvals[:, support_idx]
        rem = np.nonzero(active)[0]
        if rem.size == 0:
            raise DegenerateSamples("support budget consumed every sample point")
        cauchy = 1.0 / (points[rem][:, None] - zj[None, :])
        loewner = np.vstack([
            ((fvals[i, rem][:, None] - fj[i][None, :]) * cauchy) / scales[i]
            for i in range(s)
        ])
        # right singular vector for the smallest singular value; with ties
        # (within 1e-14 relative) the last row of Vh is still the one taken
        _u, _sv, vh = np.linalg.svd(loewner)
        weights = vh[-1, :].conj()
        if np.any(np.abs(weights) < _WEIGHT_UNDERFLOW):
            raise DegenerateSamples("zero (underflowed) barycentric weight")
        approx_vals = fvals.copy()
        for i in range(s):
            approx_vals[i, rem] = _eval_on_grid(zj, weights, fj[i], points[rem])
        errs = np.array([
            np.max(np.abs(fvals[i, rem] - approx_vals[i, rem])) / scales[i]
            for i in range(s)
        ])
        best_err = float(errs.max())
        if best_err <= tol:
            return [
                BarycentricApprox(zj, weights, fj[i]) for i in range(s)
            ]
    raise ToleranceNotReached(max_m, best_err)


@dataclass(frozen=True)
class RealizationPencil:
    """Float view of the generalized state-space realization of r.

    E carries the weights in its first row and the support bidiagonal below;
    F has a zero first row and the unit bidiagonal, so E - x F is the state
    pencil, with a = (g(z_j) w_j) and b the first unit vector closing the
    realization.  F is singular by construction.
    """

    e: np.ndarray
    f: np.ndarray
    a: np.ndarray
    b: np.ndarray


def realization_grids(z, w, gv):
    """Exact (E, minus_F, a, b) grids from rationalized data."""
    m = len(z)
    e = [[CR_ZERO] * m for _ in range(m)]
    minus_f = [[CR_ZERO] * m for _ in range(m)]
    for j in range(m):
        e[0][j] = w[j]
    for j in range(m - 1):
        e[j + 1][j] = -z[j]
        e[j + 1][j + 1] = z[j + 1]
        minus_f[j + 1][j] = CR_ONE
        minus_f[j + 1][j + 1] = -CR_ONE
    a = [[gv[j] * w[j] for j in range(m)]]
    b = [[CR_ONE if j == 0 else CR_ZERO] for j in range(m)]
    return e, minus_f, a, b


def state_pencil(r: BarycentricApprox) -> PolyMatrix:
    """The exact state pencil E - x F of the rationalized approximant."""
    z, w, gv = r.rationalized()
    e, minus_f, _a, _b = realization_grids(z, w, gv)
    return PolyMatrix.pencil(e, minus_f)


def barycentric_to_pencil(r: BarycentricApprox):
    """(RealizationPencil, SystemMatrix) for r.

    The float realization mirrors the exact one; the system matrix is exact
    (rationalized) with state E - x F, so its transfer function is exactly
    the rationalized r.
    """
    z, w, gv = r.rationalized()
    e, minus_f, a, b = realization_grids(z, w, gv)
    m = len(z)
    state = PolyMatrix.pencil(e, minus_f)
    b_blk = PolyMatrix.from_const([[-b[i][0]] for i in range(m)])
    c_blk = PolyMatrix.from_const([[-x for x in a[0]]])
    d_blk = PolyMatrix.zeros(1, 1)
    system = SystemMatrix(state, b_blk, c_blk, d_blk, m)
    fl = RealizationPencil(
        e=np.array([[x.to_complex() for x in row] for row in e]),
        f=np.array([[(-x).to_complex() for x in row] for row in minus_f]),
        a=np.array([x.to_complex() for x in a[0]]),
        b=np.array([x[0].to_complex() for x in b]),
    )
    return fl, system


def barycentric_to_quotient(r: BarycentricApprox):
    """Exact numerator/denominator pair (p, q), deliberately not reduced.

    p = sum_j g(z_j) w_j prod_{i != j} (x - z_i), q likewise with weights
    only; both have degree at most m - 1 and may share roots.
    """
    z, w, gv = r.rationalized()
    m = len(z)
    lin = [Poly((-zj, CR_ONE)) for zj in z]
    p = Poly.zero()
    q = Poly.zero()
    for j in range(m):
        prod = Poly.one()
        for i in range(m):
            if i != j:
                prod = prod * lin[i]
        q = q + Poly.constant(w[j]) * prod
        p = p + Poly.constant(gv[j] * w[j]) * prod
    return p, q


@dataclass(frozen=True)
class IrreducibilityReport:
    irreducible: bool
    common_roots: tuple
    common_factor: Poly

    def __iter__(self):
        # unpacks like the plain (irreducible, common_roots) pair
        return iter((self.irreducible, list(self.common_roots)))


def irreducibility_report(r: BarycentricApprox) -> IrreducibilityReport:
    """Common roots of the exact p and q (where the realization loses minimality).

    The verdict comes from the exact gcd of the rationalized p and q.  Roots
    of the gcd are certified exactly when possible; any leftover factor is
    handled numerically, keeping only candidates where both |p| and |q| are
    below 1e-10 times the coefficient scale.
    """
    p, q = barycentric_to_quotient(r)
    if p.is_zero or q.is_zero:
        # a zero member shares every root of the other; report the other's roots
        nonzero = q if p.is_zero else p
        roots, _resid = exact_linear_roots(nonzero)
        pts = tuple(root.to_complex() for root, _mult in roots)
        return IrreducibilityReport(False, pts, nonzero.monic())
    g = poly_gcd(p, q)
    if g.degree() == 0:
        return IrreducibilityReport(True, (), g)
    roots, resid = exact_linear_roots(g)
    pts = [root.to_complex() for root, _mult in roots]
    if resid.degree() >= 1:
        scale_p = max(abs(c.to_complex()) for c in p.coeffs) or 1.0
        scale_q = max(abs(c.to_complex()) for c in q.coeffs) or 1.0
        pf = p.to_float()
        qf = q.to_float()
        for z in np.roots(list(reversed([c.to_complex() for c in resid.coeffs]))):
            z = complex(z)
            if (
                abs(pf.eval(z)) <= 1e-10 * scale_p
                and abs(qf.eval(z)) <= 1e-10 * scale_q
            ):
                pts.append(z)
    return IrreducibilityReport(False, tuple(pts), g)


def verify_state_pencil_structure(r: BarycentricApprox) -> bool:
    """Exact structural checks on the state pencil E - x F.

    Splits off K (the bidiagonal rows below the weight row) and verifies:
    K keeps full row rank at seeded points, its highest-row-degree matrix
    has full row rank, K N^T = 0 for the product dual N, and the weight row
    times N^T reproduces the exact denominator q.
    """
    z, w, gv = r.rationalized()
    m = len(z)
    pencil = state_pencil(r)
    if m == 1:
        return pencil.entries[0][0] == Poly.constant(w[0])
    k_rows = pencil.submatrix(range(1, m), range(m))
    for probe in (ComplexRational.coerce(2), ComplexRational.coerce(-3),
                  ComplexRational(0, 1)):
        if const_rank(k_rows.eval(probe)) != m - 1:
            return False
    if const_rank(k_rows.coefficient_matrix(1)) != m - 1:
        return False
    dual_entries = []
    for j in range(m):
        prod = Poly.one()
        for i in range(m):
            if i != j:
                prod = prod * Poly((-z[i], CR_ONE))
        dual_entries.append(prod)
    n_mat = PolyMatrix([dual_entries])
    if not (k_rows @ n_mat.transpose()).is_zero():
        return False
    weight_row = PolyMatrix.from_const([list(w)])
    prod = weight_row @ n_mat.transpose()
    _p, q = barycentric_to_quotient(r)
    return prod.entries[0][0] == q
