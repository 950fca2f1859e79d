"""Block full rank pencils and their linearization conditions.

The central layout is the bordered pencil

    [ A   B    0   ]
    [-C   M   K2^T ]
    [ 0   K1   0   ]

where A is the (possibly empty) state block and [M K2^T; K1 0] is a block
full rank pencil: K1 and K2 have full row normal rank.  Given rational
bases N1, N2 dual to K1, K2, the pencil represents

    R = N2 (M + C A^{-1} B) N1^T,

and it is a linearization of R at every point of a region where the K/N
blocks keep full row rank and the bordered rank condition

    rank [A; -N2 C] = rank [A  B N1^T] = n

holds.  The infinity variant reverses all blocks (grade 1 + t1 + t2 with
t_i the uniform row degrees of the duals).  The strong construction from a
polynomial part plus a minimal constant realization is provided by
:func:`build_sbmb_linearization`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    DualBasisNotFullRankInRegion,
    NonUniformRowDegrees,
    NotSharpDegree,
    RealizationNotMinimal,
    ReversedBasisRankDeficient,
    SingularStateMatrix,
    StateNotRegular,
    UnimodularCompletionFailed,
)
from .matrices import (
    PolyMatrix,
    RatMatrix,
    const_matmul,
    const_rank,
    const_solve,
    normal_rank,
    ratmat_solve,
)
from .polynomials import MINUS_INF, Poly, RatFun, poly_gcd
from .scalars import CR_ZERO, ComplexRational
from .sysmat import (
    RegionSpec,
    SystemMatrix,
    is_minimal_in,
    rational_full_col_rank_in,
    rational_full_row_rank_in,
)

STATE_REVERSAL_REASON = "reversed state block rank-deficient at 0"


@dataclass(frozen=True)
class RowDegreeProfile:
    """Per-row degrees of a rational matrix, with the uniform value if any."""

    degrees: tuple
    t: int | None

    @property
    def is_uniform(self) -> bool:
        return self.t is not None


def row_degree_profile(N: RatMatrix) -> RowDegreeProfile:
    """Row degrees; ``t`` is set when they are all equal (and finite).

    When uniform, the defining property is double-checked: every row of the
    t-reversal must be defined and nonzero at 0.
    """
    degs = tuple(N.row_degrees())
    uniform = (
        len(degs) > 0
        and all(d == degs[0] for d in degs)
        and degs[0] != MINUS_INF
    )
    if not uniform:
        return RowDegreeProfile(degrees=degs, t=None)
    t = int(degs[0])
    rev = N.reverse(t)
    for row in rev.entries:
        vals = []
        for r in row:
            if not r.den.eval(0):
                raise ArithmeticError("t-reversal undefined at 0 despite uniform degrees")
            vals.append(r.eval(0))
        if not any(vals):
            raise ArithmeticError("t-reversal row vanishes at 0 despite uniform degrees")
    return RowDegreeProfile(degrees=degs, t=t)


@dataclass(frozen=True)
class BfrParts:
    """Blocks of a bordered block full rank pencil plus its dual bases.

    ``k1``/``k2`` may be None (empty); the matching dual then has to be a
    supplied square rational matrix (it is validated invertible as a
    rational matrix here, and invertible in the region at check time).
    ``state``/``b``/``c`` are empty when n = 0.
    """

    state: PolyMatrix
    b: PolyMatrix
    c: PolyMatrix
    m: PolyMatrix
    k1: PolyMatrix | None
    k2: PolyMatrix | None
    n1: RatMatrix
    n2: RatMatrix
    n: int

    def __post_init__(self):
        p_rows, m_cols = self.m.shape
        for name, blk in (("state", self.state), ("b", self.b), ("c", self.c),
                          ("m", self.m), ("k1", self.k1), ("k2", self.k2)):
            if blk is None:
                continue
            deg = blk.degree()
            if deg != MINUS_INF and deg > 1:
                raise DimensionMismatch(f"block {name} is not a pencil")
        if self.state.shape != (self.n, self.n):
            raise DimensionMismatch("state block must be n x n")
        if self.b.shape != (self.n, m_cols):
            raise DimensionMismatch("B block must be n x cols(M)")
        if self.c.shape != (p_rows, self.n):
            raise DimensionMismatch("C block must be rows(M) x n")
        if self.n > 0 and self.state.normal_rank() < self.n:
            raise StateNotRegular("state block has identically zero determinant")
        self._validate_duality(self.k1, self.n1, m_cols, "K1/N1")
        self._validate_duality(self.k2, self.n2, p_rows, "K2/N2")

    def _validate_duality(self, k, nbasis, full_size, label):
        if k is None:
            if nbasis.shape != (full_size, full_size):
                raise DimensionMismatch(
                    f"{label}: with an empty K the dual must be square of size {full_size}"
                )
            if normal_rank(nbasis) < full_size:
                raise DimensionMismatch(f"{label}: supplied dual is not invertible")
            return
        if k.cols != full_size:
            raise DimensionMismatch(f"{label}: K must have cols matching M")
        if nbasis.cols != full_size or k.rows + nbasis.rows != full_size:
            raise DimensionMismatch(f"{label}: row counts must sum to the column count")
        if k.normal_rank() < k.rows:
            raise DimensionMismatch(f"{label}: K does not have full row normal rank")
        prod = k.to_rational() @ nbasis.transpose()
        if not prod.is_zero():
            raise DimensionMismatch(f"{label}: K N^T is not identically zero")
        stacked = RatMatrix.block([[k.to_rational()], [nbasis]])
        if normal_rank(stacked) < full_size:
            raise DimensionMismatch(f"{label}: [K; N] is not of full normal rank")

    @property
    def k1_rows(self) -> int:
        return self.k1.rows if self.k1 is not None else 0

    @property
    def k2_rows(self) -> int:
        return self.k2.rows if self.k2 is not None else 0


def empty_state_parts(m, k1, k2, n1, n2) -> BfrParts:
    """BfrParts with n = 0 (a bare block full rank pencil)."""
    kind = m.kind
    return BfrParts(
        state=PolyMatrix.zeros(0, 0, kind),
        b=PolyMatrix.zeros(0, m.cols, kind),
        c=PolyMatrix.zeros(m.rows, 0, kind),
        m=m,
        k1=k1,
        k2=k2,
        n1=n1,
        n2=n2,
        n=0,
    )


def assemble(parts: BfrParts) -> SystemMatrix:
    """The bordered system matrix with state A and output block [M K2^T; K1 0].

    The corner variant that keeps the state in the lower-right block of the
    printed pencil is a row/column permutation of this one; ingestion of
    that layout is handled by the serializer, which permutes back to the
    canonical arrangement used here.
    """
    kind = parts.m.kind
    k1r, k2r = parts.k1_rows, parts.k2_rows
    d_grid = [[parts.m] + ([parts.k2.transpose()] if k2r else [])]
    if k1r:
        d_grid.append([parts.k1] + ([PolyMatrix.zeros(k1r, k2r, kind)] if k2r else []))
    d = PolyMatrix.block(d_grid)
    b_full = (
        PolyMatrix.block([[parts.b, PolyMatrix.zeros(parts.n, k2r, kind)]])
        if k2r
        else parts.b
    )
    c_full = (
        PolyMatrix.block([[parts.c], [PolyMatrix.zeros(k1r, parts.n, kind)]])
        if k1r
        else parts.c
    )
    try:
        return SystemMatrix(parts.state, b_full, c_full, d, parts.n)
    except SingularStateMatrix as exc:
        raise StateNotRegular(str(exc)) from exc


def corner_layout_pencil(parts: BfrParts) -> PolyMatrix:
    """The same pencil printed with the state block in the lower-right corner."""
    kind = parts.m.kind
    k1r, k2r = parts.k1_rows, parts.k2_rows
    grid = [[parts.m,
             parts.k2.transpose() if parts.k2 is not None else None,
             -parts.c]]
    if parts.k1 is not None:
        grid.append([parts.k1, PolyMatrix.zeros(k1r, k2r, kind) if k2r else None,
                     PolyMatrix.zeros(k1r, parts.n, kind)])
    grid.append([parts.b, PolyMatrix.zeros(parts.n, k2r, kind) if k2r else None,
                 parts.state])
    if k2r == 0:
        grid = [[row[0], row[2]] for row in grid]
    return PolyMatrix.block(grid)


def dual_basis_for(K: PolyMatrix) -> RatMatrix:
    """A rational basis N with K N^T = 0 and [K; N] of full normal rank.

    Computed as the exact right nullspace of K over the rational-function
    field; rows are scaled to clear denominators (yielding polynomial rows),
    made primitive, and normalized so the first nonzero entry is monic.
    """
    if K.normal_rank() < K.rows:
        raise DimensionMismatch("K must have full row normal rank")
    m = [list(row) for row in K.to_rational().entries]
    rows, cols = K.rows, K.cols
    pivots = []
    r = 0
    for j in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if not m[i][j].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][j]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][j].is_zero:
                f = m[i][j]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(j)
        r += 1
        if r == rows:
            break
    free = [j for j in range(cols) if j not in pivots]
    basis_rows = []
    one = RatFun.one("exact")
    zero = RatFun.zero("exact")
    for f_col in free:
        vec = [zero] * cols
        vec[f_col] = one
        for ridx, p_col in enumerate(pivots):
            vec[p_col] = -m[ridx][f_col]
        basis_rows.append(_normalize_poly_row(vec))
    N = RatMatrix(basis_rows, "exact")
    stacked = RatMatrix.block([[K.to_rational()], [N]])
    if normal_rank(stacked) < cols:
        raise ArithmeticError("nullspace complement lost rank")
    return N


def _normalize_poly_row(vec):
    """Clear denominators, divide by the entry gcd, make the first entry monic."""
    d = Poly.one("exact")
    for r in vec:
        d = d * (r.den // poly_gcd(d, r.den))
    polys = [r.num * (d // r.den) for r in vec]
    g = Poly.zero("exact")
    for p in polys:
        if p.is_zero:
            continue
        g = p.monic() if g.is_zero else poly_gcd(g, p)
    if not g.is_zero and g.degree() > 0:
        polys = [p // g for p in polys]
    lead = None
    for p in polys:
        if not p.is_zero:
            lead = p.leading()
            break
    if lead is not None and lead != ComplexRational.coerce(1):
        inv = Poly.constant(ComplexRational.coerce(1) / lead, "exact")
        polys = [p * inv for p in polys]
    return [RatFun.from_poly(p) for p in polys]


def _dual_or_supplied(parts: BfrParts, which: int):
    if which == 1:
        return parts.k1, parts.n1
    return parts.k2, parts.n2


def check_finite_condition(parts: BfrParts, region: RegionSpec) -> bool:
    """The bordered rank condition over the region.

    Precondition (raises DualBasisNotFullRankInRegion): K_i and N_i have
    full row rank at every point of the region.  Then the two stacked rank
    conditions are certified pointwise (finite regions) or by invariant-
    factor certificates (cofinite regions).
    """
    for which in (1, 2):
        k, nbasis = _dual_or_supplied(parts, which)
        if k is not None and not rational_full_row_rank_in(k.to_rational(), region):
            raise DualBasisNotFullRankInRegion(f"K{which} loses rank in the region")
        if not rational_full_row_rank_in(nbasis, region):
            raise DualBasisNotFullRankInRegion(f"N{which} loses rank in the region")
    if parts.n == 0:
        return True
    a_rat = parts.state.to_rational()
    stacked = RatMatrix.block([[a_rat], [-(parts.n2 @ parts.c.to_rational())]])
    wide = RatMatrix.block(
        [[a_rat, parts.b.to_rational() @ parts.n1.transpose()]]
    )
    return rational_full_col_rank_in(stacked, region) and rational_full_row_rank_in(
        wide, region
    )


def check_infinity_condition(parts: BfrParts):
    """The reversed rank condition at 0; returns (holds, grade).

    The grade is 1 + t1 + t2 with t_i the uniform row degrees of the dual
    bases.  Raises ReversedBasisRankDeficient when the reversed state block
    or any reversed K/N block loses rank at 0, and NonUniformRowDegrees when
    a dual basis has mixed row degrees.
    """
    if parts.n > 0:
        rev_state0 = parts.state.reverse(1).eval(0)
        if const_rank(rev_state0) < parts.n:
            raise ReversedBasisRankDeficient(STATE_REVERSAL_REASON)
    profiles = []
    for which in (1, 2):
        _k, nbasis = _dual_or_supplied(parts, which)
        prof = row_degree_profile(nbasis)
        if not prof.is_uniform:
            raise NonUniformRowDegrees(f"N{which} row degrees are {prof.degrees}")
        profiles.append(prof.t)
    t1, t2 = profiles
    for which, t in ((1, t1), (2, t2)):
        k, nbasis = _dual_or_supplied(parts, which)
        if k is not None:
            revk0 = k.reverse(1).eval(0)
            if const_rank(revk0) < k.rows:
                raise ReversedBasisRankDeficient(
                    f"reversed K{which} rank-deficient at 0"
                )
        revn = nbasis.reverse(t)
        if not revn.is_defined_at(0):
            raise ReversedBasisRankDeficient(
                f"reversed N{which} undefined at 0"
            )
        if const_rank(revn.eval(0)) < nbasis.rows:
            raise ReversedBasisRankDeficient(
                f"reversed N{which} rank-deficient at 0"
            )
    grade = 1 + t1 + t2
    if parts.n == 0:
        return True, grade
    rev_state0 = parts.state.reverse(1).eval(0)
    rev_c0 = parts.c.reverse(1).eval(0)
    rev_b0 = parts.b.reverse(1).eval(0)
    n2rev0 = parts.n2.reverse(t2).eval(0)
    n1rev0 = parts.n1.reverse(t1).eval(0)
    stacked = rev_state0 + [
        [-x for x in row] for row in const_matmul(n2rev0, rev_c0)
    ]
    n1rev0_t = [
        [n1rev0[i][j] for i in range(len(n1rev0))] for j in range(len(n1rev0[0]))
    ]
    bn1 = const_matmul(rev_b0, n1rev0_t)
    wide = [rev_state0[i] + bn1[i] for i in range(parts.n)]
    ok = const_rank(stacked) == parts.n and const_rank(wide) == parts.n
    return ok, grade


def recover_R(parts: BfrParts) -> RatMatrix:
    """N2 (M + C A^{-1} B) N1^T; with an empty state this is N2 M N1^T."""
    core = parts.m.to_rational()
    if parts.n > 0:
        if parts.state.normal_rank() < parts.n:
            raise SingularStateMatrix("state block is singular")
        x = ratmat_solve(parts.state.to_rational(), parts.b.to_rational())
        core = core + (parts.c.to_rational() @ x)
    return parts.n2 @ core @ parts.n1.transpose()


def _minimal_basis_row_degree(K: PolyMatrix, label: str) -> int:
    """Check K is a minimal basis with equal row degrees; return that degree."""
    prof = row_degree_profile(K.to_rational())
    if not prof.is_uniform:
        raise NotSharpDegree(f"{label} has non-uniform row degrees {prof.degrees}")
    if not rational_full_row_rank_in(K.to_rational(), RegionSpec.cofinite(())):
        raise NotSharpDegree(f"{label} loses rank at a finite point")
    hr = [[p.coefficient(prof.t) for p in row] for row in K.entries]
    if const_rank(hr) < K.rows:
        raise NotSharpDegree(f"{label} highest-row-degree matrix is rank deficient")
    return prof.t


def _unimodular_completion(K: PolyMatrix | None, N: RatMatrix, label: str):
    """Constant Khat with Khat N^T = I and [K; Khat] unimodular."""
    n_poly = N.as_polynomial()
    rows_n = n_poly.rows
    cols = n_poly.cols
    tau = max(n_poly.degree(), 0)
    # Khat (rows_n x cols) satisfies sum_l Khat[i,l] * N^T[l,j](x) = delta_ij:
    # stack the x^k coefficient matrices of N^T horizontally and solve.
    nt = n_poly.transpose()
    v_blocks = [nt.coefficient_matrix(kdeg) for kdeg in range(tau + 1)]
    v = [sum((blk[i] for blk in v_blocks), []) for i in range(cols)]
    w_cols = rows_n * (tau + 1)
    w = [[CR_ZERO] * w_cols for _ in range(rows_n)]
    for i in range(rows_n):
        w[i][i] = ComplexRational.coerce(1)
    try:
        sol = const_solve(
            [[v[l][j] for l in range(cols)] for j in range(w_cols)],
            [[w[i][j] for i in range(rows_n)] for j in range(w_cols)],
        )
    except ValueError as exc:
        raise UnimodularCompletionFailed(
            f"{label}: no constant left inverse of N^T"
        ) from exc
    khat_entries = [[sol[l][i] for l in range(cols)] for i in range(rows_n)]
    khat = PolyMatrix.from_const(khat_entries, "exact")
    if K is not None:
        u = PolyMatrix.block([[K], [khat]])
    else:
        u = khat
    det = u.det()
    if det.is_zero or det.degree() > 0:
        raise UnimodularCompletionFailed(f"{label}: completion is not unimodular")
    return khat


def build_sbmb_linearization(pencil_parts, realization, x=None, y=None) -> BfrParts:
    """Bordered pencil from a sharp-degree strong block minimal bases pencil.

    ``pencil_parts`` is (M, K1, K2, N1, N2) describing the polynomial part
    D = N2 M N1^T; ``realization`` is a constant minimal triple (A, B, C)
    for the strictly proper part C (xI - A)^{-1} B; ``x``/``y`` are optional
    constant invertible matrices mixed into the state block.  The result
    represents D + C (xI - A)^{-1} B and is a linearization everywhere,
    including infinity at grade deg(D).
    """
    m_blk, k1, k2, n1, n2 = pencil_parts
    a_const, b_const, c_const = (
        PolyMatrix.from_const(blk, "exact") if not isinstance(blk, PolyMatrix) else blk
        for blk in realization
    )
    n = a_const.rows
    if a_const.shape != (n, n):
        raise DimensionMismatch("realization state must be square")
    deg_n1 = _minimal_basis_row_degree(n1.as_polynomial(), "N1") if k1 is not None else (
        _supplied_degree(n1)
    )
    deg_n2 = _minimal_basis_row_degree(n2.as_polynomial(), "N2") if k2 is not None else (
        _supplied_degree(n2)
    )
    for k, label in ((k1, "K1"), (k2, "K2")):
        if k is None:
            continue
        deg_k = _minimal_basis_row_degree(k, label)
        if deg_k != 1:
            raise NotSharpDegree(f"{label} row degrees must all equal 1")
    d_poly = (n2 @ m_blk.to_rational() @ n1.transpose())
    if not all(r.is_polynomial() for row in d_poly.entries for r in row):
        raise NotSharpDegree("N2 M N1^T is not polynomial")
    deg_d = d_poly.degree()
    if deg_d != deg_n1 + deg_n2 + 1:
        raise NotSharpDegree(
            f"deg D = {deg_d} but deg N1 + deg N2 + 1 = {deg_n1 + deg_n2 + 1}"
        )
    ident = PolyMatrix.identity(n, "exact")
    lam = PolyMatrix.identity(n, "exact").scale(Poly.x())
    state_pencil = lam - a_const
    realization_sm = SystemMatrix(state_pencil, b_const, c_const,
                                  PolyMatrix.zeros(c_const.rows, b_const.cols, "exact"), n)
    if not is_minimal_in(realization_sm, RegionSpec.cofinite(())):
        raise RealizationNotMinimal("(A, B, C) is not controllable and observable")
    khat1 = _unimodular_completion(k1, n1, "K1")
    khat2 = _unimodular_completion(k2, n2, "K2")
    x_mat = PolyMatrix.from_const(x, "exact") if x is not None else ident
    y_mat = PolyMatrix.from_const(y, "exact") if y is not None else ident
    if x_mat.det().is_zero or y_mat.det().is_zero:
        raise DimensionMismatch("X and Y must be invertible")
    state = x_mat @ state_pencil @ y_mat
    b_blk = x_mat @ b_const @ khat1
    c_blk = khat2.transpose() @ c_const @ y_mat
    return BfrParts(
        state=state,
        b=b_blk,
        c=c_blk,
        m=m_blk,
        k1=k1,
        k2=k2,
        n1=n1,
        n2=n2,
        n=n,
    )


def _supplied_degree(nbasis: RatMatrix) -> int:
    prof = row_degree_profile(nbasis)
    if not prof.is_uniform:
        raise NotSharpDegree("supplied dual has non-uniform row degrees")
    return prof.t
