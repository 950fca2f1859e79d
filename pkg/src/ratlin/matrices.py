"""Polynomial and rational matrices over exact or float scalars.

A :class:`PolyMatrix` holds :class:`~ratlin.polynomials.Poly` entries, a
:class:`RatMatrix` holds :class:`~ratlin.polynomials.RatFun` entries.  The
exact kind supports the structural queries the verification oracle relies
on: normal rank by fraction-free (Bareiss) elimination, exact determinants,
evaluation, degree, and g-reversal.

Constant exact matrices are plain nested lists of ComplexRational; the
``const_*`` helpers implement rank / rref / solve / inverse over Q(i).
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .errors import AllZeroMatrix, DimensionMismatch, NotDefinedAt
from .polynomials import MINUS_INF, Poly, RatFun, poly_lcm
from .scalars import CR_ONE, CR_ZERO, ComplexRational

# ---------------------------------------------------------------------------
# constant exact matrices (nested lists of ComplexRational)
# ---------------------------------------------------------------------------


def const_zeros(rows: int, cols: int):
    return [[CR_ZERO] * cols for _ in range(rows)]


def const_identity(n: int):
    out = const_zeros(n, n)
    for i in range(n):
        out[i][i] = CR_ONE
    return out


def const_matmul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = const_zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            x = ai[k]
            if not x:
                continue
            bk = b[k]
            oi = out[i]
            for j in range(cols):
                if bk[j]:
                    oi[j] = oi[j] + x * bk[j]
    return out


def const_conj_transpose(a):
    rows = len(a)
    cols = len(a[0]) if rows else 0
    return [[a[i][j].conjugate() for i in range(rows)] for j in range(cols)]


def const_rref(mat):
    """Reduced row echelon form; returns (rref, pivot_columns)."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for j in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][j]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][j]
        if pv != CR_ONE:
            m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][j]:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(j)
        r += 1
        if r == rows:
            break
    return m, pivots


def const_rank(mat) -> int:
    if not mat or not mat[0]:
        return 0
    _, pivots = const_rref(mat)
    return len(pivots)


def const_nullspace(mat):
    """Basis of the right nullspace as a list of column vectors."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows == 0:
        return [[CR_ONE if i == j else CR_ZERO for i in range(cols)] for j in range(cols)]
    rref, pivots = const_rref(mat)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        vec = [CR_ZERO] * cols
        vec[f] = CR_ONE
        for r, p in enumerate(pivots):
            vec[p] = -rref[r][f]
        basis.append(vec)
    return basis


def const_solve(a, b):
    """Solve a X = b exactly (free variables set to zero).

    ``b`` is a matrix with as many rows as ``a``; raises ValueError if the
    system is inconsistent.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    nrhs = len(b[0]) if b and b[0] else 0
    aug = [a[i][:] + b[i][:] for i in range(rows)]
    rref, pivots = const_rref(aug)
    for i in range(len(pivots), rows):
        if any(rref[i][cols:]):
            raise ValueError("inconsistent linear system")
    for p in pivots:
        if p >= cols:
            raise ValueError("inconsistent linear system")
    x = const_zeros(cols, nrhs)
    for r, p in enumerate(pivots):
        for j in range(nrhs):
            x[p][j] = rref[r][cols + j]
    return x


def const_inverse(a):
    n = len(a)
    rref, pivots = const_rref([a[i][:] + const_identity(n)[i] for i in range(n)])
    if len(pivots) != n or pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rref]


def const_to_numpy(a) -> np.ndarray:
    return np.array([[x.to_complex() for x in row] for row in a], dtype=complex)


# ---------------------------------------------------------------------------
# polynomial matrices
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Rectangular matrix of polynomials of one scalar kind."""

    __slots__ = ("rows", "cols", "entries", "kind")

    def __init__(self, entries, kind=None, cols=None):
        ents = [list(row) for row in entries]
        rows = len(ents)
        ncols = len(ents[0]) if rows else (cols if cols is not None else 0)
        if any(len(row) != ncols for row in ents):
            raise DimensionMismatch("ragged rows")
        if kind is None:
            kind = ents[0][0].kind if rows and ncols else "exact"
        for row in ents:
            for p in row:
                if not isinstance(p, Poly) or p.kind != kind:
                    raise TypeError("entries must be Poly of one kind")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", tuple(tuple(row) for row in ents))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols, kind="exact"):
        z = Poly.zero(kind)
        return cls([[z] * cols for _ in range(rows)], kind, cols=cols)

    @classmethod
    def identity(cls, n, kind="exact"):
        z, o = Poly.zero(kind), Poly.one(kind)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], kind)

    @classmethod
    def from_const(cls, const_rows, kind="exact"):
        """Degree-0 matrix from a grid of scalars."""
        return cls(
            [[Poly.constant(x, kind) for x in row] for row in const_rows], kind
        )

    @classmethod
    def pencil(cls, c0, c1, kind="exact"):
        """The pencil c0 + x*c1 from two constant grids."""
        rows = len(c0)
        cols = len(c0[0]) if rows else 0
        if len(c1) != rows or (rows and len(c1[0]) != cols):
            raise DimensionMismatch("pencil coefficient shapes differ")
        return cls(
            [[Poly((c0[i][j], c1[i][j]), kind) for j in range(cols)] for i in range(rows)],
            kind,
        )

    @classmethod
    def block(cls, grid):
        """Assemble from a grid of PolyMatrix blocks (None = zero filler).

        ``None`` is only allowed where both the row and column sizes can be
        inferred from other blocks in the same band.
        """
        brows = len(grid)
        bcols = len(grid[0])
        kind = None
        row_sizes = [None] * brows
        col_sizes = [None] * bcols
        for i in range(brows):
            for j in range(bcols):
                blk = grid[i][j]
                if blk is None:
                    continue
                kind = kind or blk.kind
                if row_sizes[i] is None:
                    row_sizes[i] = blk.rows
                elif row_sizes[i] != blk.rows:
                    raise DimensionMismatch("inconsistent block row sizes")
                if col_sizes[j] is None:
                    col_sizes[j] = blk.cols
                elif col_sizes[j] != blk.cols:
                    raise DimensionMismatch("inconsistent block col sizes")
        if any(s is None for s in row_sizes) or any(s is None for s in col_sizes):
            raise DimensionMismatch("cannot infer a block size")
        out = []
        for i in range(brows):
            band = [
                grid[i][j] if grid[i][j] is not None
                else cls.zeros(row_sizes[i], col_sizes[j], kind)
                for j in range(bcols)
            ]
            for r in range(row_sizes[i]):
                out.append([p for blk in band for p in blk.entries[r]])
        return cls(out, kind, cols=sum(col_sizes))

    @classmethod
    def kron(cls, a: "PolyMatrix", b: "PolyMatrix") -> "PolyMatrix":
        out = []
        for i in range(a.rows):
            for k in range(b.rows):
                row = []
                for j in range(a.cols):
                    for l in range(b.cols):
                        row.append(a.entries[i][j] * b.entries[k][l])
                out.append(row)
        return cls(out, a.kind, cols=a.cols * b.cols)

    # -- structure -------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.kind,
            cols=self.rows,
        )

    def submatrix(self, row_idx, col_idx) -> "PolyMatrix":
        col_idx = list(col_idx)
        return PolyMatrix(
            [[self.entries[i][j] for j in col_idx] for i in row_idx],
            self.kind,
            cols=len(col_idx),
        )

    def row(self, i):
        return self.submatrix([i], range(self.cols))

    def map_entries(self, f) -> "PolyMatrix":
        return PolyMatrix(
            [[f(p) for p in row] for row in self.entries], self.kind, cols=self.cols
        )

    def degree(self):
        """Max entry degree; MINUS_INF for an all-zero matrix."""
        degs = [p.degree() for row in self.entries for p in row]
        return max(degs, default=MINUS_INF)

    def row_degrees(self):
        return [
            max((p.degree() for p in row), default=MINUS_INF) for row in self.entries
        ]

    def coefficient_matrix(self, k: int):
        """Constant grid of the x**k coefficients."""
        return [[p.coefficient(k) for p in row] for row in self.entries]

    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.entries for p in row)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, self.entries))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch("shapes differ in addition")
        return PolyMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.kind,
            cols=self.cols,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PolyMatrix(
            [[-p for p in row] for row in self.entries], self.kind, cols=self.cols
        )

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            return self.to_rational() @ other
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        zero = Poly.zero(self.kind)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero:
                        continue
                    b = other.entries[k][j]
                    if b.is_zero:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.kind, cols=other.cols)

    def scale(self, p: Poly) -> "PolyMatrix":
        return PolyMatrix(
            [[p * q for q in row] for row in self.entries], self.kind, cols=self.cols
        )

    # -- evaluation / reversal ----------------------------------------------

    def eval(self, x):
        """Constant matrix of entry values (grid for exact, ndarray for float)."""
        if self.kind == "float":
            return np.array(
                [[p.eval(x) for p in row] for row in self.entries], dtype=complex
            )
        return [[p.eval(x) for p in row] for row in self.entries]

    def reverse(self, g: int) -> "PolyMatrix":
        """Entrywise g-reversal; requires g >= degree of every entry."""
        out = []
        for row in self.entries:
            new_row = []
            for p in row:
                r = p.reverse(g)
                if not r.is_polynomial():
                    raise ValueError("g-reversal is not polynomial; use RatMatrix")
                new_row.append(r.as_polynomial())
            out.append(new_row)
        return PolyMatrix(out, self.kind, cols=self.cols)

    def to_rational(self) -> "RatMatrix":
        return RatMatrix(
            [[RatFun.from_poly(p) for p in row] for row in self.entries],
            self.kind,
            cols=self.cols,
        )

    def to_float(self) -> "PolyMatrix":
        if self.kind == "float":
            return self
        return PolyMatrix(
            [[p.to_float() for p in row] for row in self.entries],
            "float",
            cols=self.cols,
        )

    def to_float_pencil(self):
        """(P0, P1) complex ndarrays with P(x) = P0 + x*P1; degree must be <= 1."""
        deg = self.degree()
        if deg != MINUS_INF and deg > 1:
            raise ValueError("matrix is not a pencil")
        m = self.to_float()
        p0 = np.array(
            [[p.coefficient(0) for p in row] for row in m.entries], dtype=complex
        )
        p1 = np.array(
            [[p.coefficient(1) for p in row] for row in m.entries], dtype=complex
        )
        return p0, p1

    # -- rank and determinant -------------------------------------------------

    def normal_rank(self) -> int:
        if self.kind != "exact":
            raise TypeError("normal_rank requires exact kind")
        return _bareiss_rank([list(row) for row in self.entries])

    def det(self) -> Poly:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        if self.kind != "exact":
            raise TypeError("det requires exact kind")
        if self.rows == 0:
            return Poly.one("exact")
        return _bareiss_det([list(row) for row in self.entries])

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, kind={self.kind!r})"

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(str(p) for p in row) for row in self.entries
        ) + "]"


def _pivot_search(m, k):
    """Nonzero entry of minimal degree in the trailing submatrix, row-major ties."""
    best = None
    best_deg = None
    for i in range(k, len(m)):
        for j in range(k, len(m[0])):
            p = m[i][j]
            if p.is_zero:
                continue
            d = p.degree()
            if best is None or d < best_deg:
                best, best_deg = (i, j), d
    return best


def _bareiss_steps(m):
    """Fraction-free elimination; yields (rank, sign, last_pivot)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    prev = Poly.one("exact")
    sign = 1
    rank = 0
    last = Poly.one("exact")
    for k in range(min(rows, cols)):
        pos = _pivot_search(m, k)
        if pos is None:
            break
        i, j = pos
        if i != k:
            m[k], m[i] = m[i], m[k]
            sign = -sign
        if j != k:
            for row in m:
                row[k], row[j] = row[j], row[k]
            sign = -sign
        piv = m[k][k]
        for i2 in range(k + 1, rows):
            for j2 in range(k + 1, cols):
                num = piv * m[i2][j2] - m[i2][k] * m[k][j2]
                q, r = num.divmod(prev)
                if not r.is_zero:
                    raise ArithmeticError("inexact Bareiss division")
                m[i2][j2] = q
            m[i2][k] = Poly.zero("exact")
        prev = piv
        last = piv
        rank += 1
    return rank, sign, last


def _bareiss_rank(m) -> int:
    rank, _, _ = _bareiss_steps(m)
    return rank


def _bareiss_det(m) -> Poly:
    n = len(m)
    rank, sign, last = _bareiss_steps(m)
    if rank < n:
        return Poly.zero("exact")
    return last if sign == 1 else -last


# ---------------------------------------------------------------------------
# rational matrices
# ---------------------------------------------------------------------------


class RatMatrix:
    """Rectangular matrix of rational functions (reduced in the exact kind)."""

    __slots__ = ("rows", "cols", "entries", "kind")

    def __init__(self, entries, kind=None, cols=None):
        ents = [list(row) for row in entries]
        rows = len(ents)
        ncols = len(ents[0]) if rows else (cols if cols is not None else 0)
        if any(len(row) != ncols for row in ents):
            raise DimensionMismatch("ragged rows")
        if kind is None:
            kind = ents[0][0].kind if rows and ncols else "exact"
        for row in ents:
            for r in row:
                if not isinstance(r, RatFun) or r.kind != kind:
                    raise TypeError("entries must be RatFun of one kind")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", tuple(tuple(row) for row in ents))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def zeros(cls, rows, cols, kind="exact"):
        z = RatFun.zero(kind)
        return cls([[z] * cols for _ in range(rows)], kind, cols=cols)

    @classmethod
    def identity(cls, n, kind="exact"):
        z, o = RatFun.zero(kind), RatFun.one(kind)
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], kind)

    @classmethod
    def diag(cls, funs, kind="exact"):
        n = len(funs)
        z = RatFun.zero(kind)
        return cls(
            [[funs[i] if i == j else z for j in range(n)] for i in range(n)], kind
        )

    @classmethod
    def block(cls, grid):
        coerced = [
            [blk.to_rational() if isinstance(blk, PolyMatrix) else blk for blk in band]
            for band in grid
        ]
        brows = len(coerced)
        bcols = len(coerced[0])
        row_sizes = [None] * brows
        col_sizes = [None] * bcols
        kind = None
        for i in range(brows):
            for j in range(bcols):
                blk = coerced[i][j]
                if blk is None:
                    continue
                kind = kind or blk.kind
                if row_sizes[i] is None:
                    row_sizes[i] = blk.rows
                elif row_sizes[i] != blk.rows:
                    raise DimensionMismatch("inconsistent block row sizes")
                if col_sizes[j] is None:
                    col_sizes[j] = blk.cols
                elif col_sizes[j] != blk.cols:
                    raise DimensionMismatch("inconsistent block col sizes")
        if any(s is None for s in row_sizes) or any(s is None for s in col_sizes):
            raise DimensionMismatch("cannot infer a block size")
        out = []
        for i in range(brows):
            band = [
                coerced[i][j]
                if coerced[i][j] is not None
                else cls.zeros(row_sizes[i], col_sizes[j], kind)
                for j in range(bcols)
            ]
            for r in range(row_sizes[i]):
                out.append([p for blk in band for p in blk.entries[r]])
        return cls(out, kind, cols=sum(col_sizes))

    @classmethod
    def kron(cls, a: "RatMatrix", b: "RatMatrix") -> "RatMatrix":
        out = []
        for i in range(a.rows):
            for k in range(b.rows):
                row = []
                for j in range(a.cols):
                    for l in range(b.cols):
                        row.append(a.entries[i][j] * b.entries[k][l])
                out.append(row)
        return cls(out, a.kind, cols=a.cols * b.cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.kind,
            cols=self.rows,
        )

    def submatrix(self, row_idx, col_idx) -> "RatMatrix":
        col_idx = list(col_idx)
        return RatMatrix(
            [[self.entries[i][j] for j in col_idx] for i in row_idx],
            self.kind,
            cols=len(col_idx),
        )

    def is_zero(self) -> bool:
        return all(r.is_zero for row in self.entries for r in row)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, self.entries))

    def __add__(self, other):
        if isinstance(other, PolyMatrix):
            other = other.to_rational()
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch("shapes differ in addition")
        return RatMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.kind,
            cols=self.cols,
        )

    def __sub__(self, other):
        if isinstance(other, PolyMatrix):
            other = other.to_rational()
        return self + (-other)

    def __neg__(self):
        return RatMatrix(
            [[-r for r in row] for row in self.entries], self.kind, cols=self.cols
        )

    def __matmul__(self, other):
        if isinstance(other, PolyMatrix):
            other = other.to_rational()
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch("inner dimensions differ")
        zero = RatFun.zero(self.kind)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero:
                        continue
                    b = other.entries[k][j]
                    if b.is_zero:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RatMatrix(out, self.kind, cols=other.cols)

    def __rmatmul__(self, other):
        if isinstance(other, PolyMatrix):
            return other.to_rational() @ self
        return NotImplemented

    def scale(self, f) -> "RatMatrix":
        if isinstance(f, Poly):
            f = RatFun.from_poly(f)
        return RatMatrix(
            [[f * r for r in row] for row in self.entries], self.kind, cols=self.cols
        )

    # -- queries ---------------------------------------------------------

    def degree(self):
        """Max entry degree over nonzero entries; MINUS_INF if all zero."""
        degs = [
            r.degree() for row in self.entries for r in row if not r.is_zero
        ]
        if not degs:
            return MINUS_INF
        return max(degs)

    def row_degrees(self):
        out = []
        for row in self.entries:
            degs = [r.degree() for r in row if not r.is_zero]
            out.append(max(degs) if degs else MINUS_INF)
        return out

    def eval(self, x):
        """Entrywise value; raises NotDefinedAt if a reduced denominator vanishes."""
        out = []
        for row in self.entries:
            vals = []
            for r in row:
                try:
                    vals.append(r.eval(x))
                except NotDefinedAt:
                    raise NotDefinedAt(x)
            out.append(vals)
        if self.kind == "float":
            return np.array(out, dtype=complex)
        return out

    def is_defined_at(self, x) -> bool:
        for row in self.entries:
            for r in row:
                d = r.den.eval(x)
                if (not d) if self.kind == "exact" else (d == 0):
                    return False
        return True

    def reverse(self, g: int) -> "RatMatrix":
        return RatMatrix(
            [[r.reverse(g) for r in row] for row in self.entries],
            self.kind,
            cols=self.cols,
        )

    def denominator_lcm(self) -> Poly:
        """Monic lcm of all reduced entry denominators."""
        if self.kind != "exact":
            raise TypeError("denominator_lcm requires exact kind")
        d = Poly.one("exact")
        for row in self.entries:
            for r in row:
                d = poly_lcm(d, r.den)
        return d

    def clear_denominators(self):
        """(N, d) with N polynomial, d the monic denominator lcm, self = N/d."""
        d = self.denominator_lcm()
        out = []
        for row in self.entries:
            new_row = []
            for r in row:
                q, rem = d.divmod(r.den)
                if not rem.is_zero:
                    raise ArithmeticError("lcm does not clear a denominator")
                new_row.append(r.num * q)
            out.append(new_row)
        return PolyMatrix(out, "exact"), d

    def normal_rank(self) -> int:
        if self.kind != "exact":
            raise TypeError("normal_rank requires exact kind")
        return normal_rank(self)

    def det(self) -> RatFun:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        if self.rows == 0:
            return RatFun.one(self.kind)
        n, d = self.clear_denominators()
        return RatFun(n.det(), d ** self.rows)

    def to_float(self) -> "RatMatrix":
        if self.kind == "float":
            return self
        return RatMatrix(
            [[r.to_float() for r in row] for row in self.entries],
            "float",
            cols=self.cols,
        )

    def as_polynomial(self) -> PolyMatrix:
        return PolyMatrix(
            [[r.as_polynomial() for r in row] for row in self.entries],
            self.kind,
            cols=self.cols,
        )

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, kind={self.kind!r})"

    def __str__(self):
        return "[" + "; ".join(
            ", ".join(str(r) for r in row) for row in self.entries
        ) + "]"


def ratmat_degree(R: RatMatrix):
    """Degree of a rational matrix; raises AllZeroMatrix when every entry is 0."""
    d = R.degree()
    if d == MINUS_INF:
        raise AllZeroMatrix("degree of the zero matrix")
    return d


def _seeded_rational_points(seed=0x5EED):
    rnd = random.Random(seed)
    while True:
        yield ComplexRational(
            Fraction(rnd.randint(-400, 400), rnd.randint(1, 37)),
            Fraction(rnd.randint(-400, 400), rnd.randint(1, 37)),
        )


def normal_rank(R) -> int:
    """Rank over the rational-function field.

    The authoritative value comes from exact fraction-free elimination on a
    denominator-cleared copy; a deterministic seeded evaluation point (away
    from all entry poles) provides a cheap cross-check, since the rank at
    any defined point can never exceed the normal rank.
    """
    if isinstance(R, PolyMatrix):
        R = R.to_rational()
    if R.kind != "exact":
        raise TypeError("normal_rank requires exact kind")
    if R.is_empty():
        return 0
    cleared = []
    for row in R.entries:
        d = Poly.one("exact")
        for r in row:
            d = poly_lcm(d, r.den)
        new_row = []
        for r in row:
            q, rem = d.divmod(r.den)
            if not rem.is_zero:
                raise ArithmeticError("row lcm does not clear a denominator")
            new_row.append(r.num * q)
        cleared.append(new_row)
    rank = _bareiss_rank(cleared)
    for point in _seeded_rational_points():
        if R.is_defined_at(point):
            eval_rank = const_rank(R.eval(point))
            if eval_rank > rank:
                raise AssertionError(
                    "evaluation rank exceeds elimination rank; elimination bug"
                )
            break
    return rank


def ratmat_solve(A: RatMatrix, B: RatMatrix) -> RatMatrix:
    """Solve A X = B over the rational-function field (A square, regular)."""
    if A.rows != A.cols:
        raise DimensionMismatch("state matrix must be square")
    if A.rows != B.rows:
        raise DimensionMismatch("right-hand side has wrong row count")
    n = A.rows
    m = B.cols
    aug = [list(A.entries[i]) + list(B.entries[i]) for i in range(n)]
    for k in range(n):
        pivot_row = None
        for i in range(k, n):
            if not aug[i][k].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            raise ValueError("singular matrix in rational solve")
        aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        pv = aug[k][k]
        aug[k] = [x / pv for x in aug[k]]
        for i in range(n):
            if i != k and not aug[i][k].is_zero:
                f = aug[i][k]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[k])]
    return RatMatrix([row[n:] for row in aug], A.kind)
