"""Linear polynomial system matrices and the spectral linearization verifier.

A system matrix is the block pencil ``[A B; -C D]`` with a regular state
block A (possibly empty, n = 0).  Its transfer function is
``D + C A^{-1} B``.  The verifier certifies "linearization of G in a region"
through the spectral characterization: the normal-rank bookkeeping plus the
requirement that the state block carries exactly the pole elementary
divisors of G and the whole pencil carries exactly the zero elementary
divisors of G, over the requested region.

Regions are either explicit finite point sets or cofinite sets (everything
except a finite exclusion list).  Cofinite checks never sample points: they
compare invariant-factor chains after dividing out the factors attached to
excluded points, which is an exact algebraic certificate even when the
structure points themselves are irrational.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DimensionMismatch,
    NotDefinedAt,
    PreconditionNotMinimal,
    SingularStateMatrix,
)
from .matrices import PolyMatrix, RatMatrix, const_rank, normal_rank, ratmat_solve
from .polynomials import MINUS_INF, Poly, poly_gcd
from .scalars import ComplexRational
from .smith import (
    exact_linear_roots,
    multiplicity_at,
    smith_invariant_factors,
    strip_points,
)


@dataclass(frozen=True)
class RegionSpec:
    """A subset of the base field: an explicit finite set or a cofinite set."""

    kind: str
    points: tuple = ()
    excluded: tuple = ()
    grade: int | None = None

    def __post_init__(self):
        if self.kind not in ("finite_set", "cofinite", "infinity"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.kind == "finite_set" and not self.points:
            raise ValueError("finite_set region must be nonempty")
        if self.kind == "infinity" and self.grade is None:
            raise ValueError("infinity region needs a grade")

    @classmethod
    def finite_set(cls, points):
        return cls(
            kind="finite_set",
            points=tuple(ComplexRational.coerce(p) for p in points),
        )

    @classmethod
    def cofinite(cls, excluded=()):
        return cls(
            kind="cofinite",
            excluded=tuple(ComplexRational.coerce(p) for p in excluded),
        )

    @classmethod
    def at_infinity(cls, grade: int):
        return cls(kind="infinity", grade=grade)

    def __contains__(self, x) -> bool:
        x = ComplexRational.coerce(x)
        if self.kind == "finite_set":
            return x in self.points
        if self.kind == "cofinite":
            return x not in self.excluded
        return False


class SystemMatrix:
    """Linear polynomial system matrix [A B; -C D] with state dimension n.

    All four blocks are pencils (degree <= 1).  n = 0 means empty state
    blocks and the system matrix is just D.
    """

    __slots__ = ("a", "b", "c", "d", "n")

    def __init__(self, a: PolyMatrix, b: PolyMatrix, c: PolyMatrix, d: PolyMatrix, n: int):
        if n < 0:
            raise DimensionMismatch("negative state dimension")
        if a.shape != (n, n):
            raise DimensionMismatch("state block must be n x n")
        if b.rows != n or c.cols != n:
            raise DimensionMismatch("B/C blocks not conformal with the state")
        if b.cols != d.cols or c.rows != d.rows:
            raise DimensionMismatch("B/C blocks not conformal with D")
        for blk in (a, b, c, d):
            if blk.kind != "exact":
                raise TypeError("system matrices are exact-kind objects")
            deg = blk.degree()
            if deg != MINUS_INF and deg > 1:
                raise DimensionMismatch("system matrix blocks must be pencils")
        if n > 0 and a.normal_rank() < n:
            raise SingularStateMatrix("det A is identically zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name, value):
        raise AttributeError("SystemMatrix is immutable")

    @classmethod
    def from_d(cls, d: PolyMatrix) -> "SystemMatrix":
        empty_state = PolyMatrix.zeros(0, 0, d.kind)
        return cls(
            empty_state,
            PolyMatrix.zeros(0, d.cols, d.kind),
            PolyMatrix.zeros(d.rows, 0, d.kind),
            d,
            0,
        )

    @property
    def output_shape(self):
        return self.d.shape

    def pencil(self) -> PolyMatrix:
        """The assembled pencil [A B; -C D]."""
        if self.n == 0:
            return self.d
        return PolyMatrix.block([[self.a, self.b], [-self.c, self.d]])

    def transfer_function(self) -> RatMatrix:
        """D + C A^{-1} B, computed exactly."""
        if self.n == 0:
            return self.d.to_rational()
        if self.a.kind != "exact":
            raise TypeError("transfer_function requires exact kind")
        x = ratmat_solve(self.a.to_rational(), self.b.to_rational())
        return self.d.to_rational() + (self.c.to_rational() @ x)

    def reversed(self) -> "SystemMatrix":
        """Blockwise 1-reversal (swaps the pencil coefficients)."""
        return SystemMatrix(
            self.a.reverse(1),
            self.b.reverse(1),
            self.c.reverse(1),
            self.d.reverse(1),
            self.n,
        )

    def __repr__(self):
        q, r = self.d.shape
        return f"SystemMatrix(n={self.n}, output {q}x{r})"


def transfer_function(P: SystemMatrix) -> RatMatrix:
    return P.transfer_function()


def is_minimal_at(P: SystemMatrix, x0) -> bool:
    """rank [A; C](x0) = rank [A B](x0) = n (vacuously true for n = 0)."""
    if P.n == 0:
        return True
    x0 = ComplexRational.coerce(x0)
    stacked = PolyMatrix.block([[P.a], [P.c]])
    wide = PolyMatrix.block([[P.a, P.b]])
    return (
        const_rank(stacked.eval(x0)) == P.n and const_rank(wide.eval(x0)) == P.n
    )


def is_minimal_in(P: SystemMatrix, region: RegionSpec) -> bool:
    """Minimality over a finite or cofinite region, certified exactly."""
    if P.n == 0:
        return True
    if region.kind == "finite_set":
        return all(is_minimal_at(P, x0) for x0 in region.points)
    if region.kind != "cofinite":
        raise ValueError("minimality region must be finite_set or cofinite")
    stacked = PolyMatrix.block([[P.a], [P.c]])
    wide = PolyMatrix.block([[P.a, P.b]])
    return _poly_full_rank_in_cofinite(
        stacked, P.n, region.excluded
    ) and _poly_full_rank_in_cofinite(wide, P.n, region.excluded)


def _poly_full_rank_in_cofinite(M: PolyMatrix, rank_needed: int, excluded) -> bool:
    """rank M(x0) == rank_needed for every x0 outside ``excluded``.

    Uses the determinantal-divisor certificate: the product of the invariant
    factors must become constant once the excluded-point factors are divided
    out.  Requires rank_needed == min(M.shape).
    """
    if rank_needed != min(M.rows, M.cols):
        raise ValueError("certificate requires the full min-dimension rank")
    factors = smith_invariant_factors(M)
    if len(factors) < rank_needed:
        return False
    prod = Poly.one("exact")
    for f in factors:
        prod = prod * f
    return strip_points(prod, excluded).is_constant()


def rational_full_row_rank_in(M: RatMatrix, region: RegionSpec) -> bool:
    """Full row rank of a rational matrix at every point of the region.

    At each region point the matrix must also be defined there.  For a
    cofinite region this means every entry pole lies in the excluded set;
    rank is then certified after clearing those (excluded-only) denominator
    factors row by row.
    """
    if isinstance(M, PolyMatrix):
        M = M.to_rational()
    if M.rows == 0:
        return True
    if region.kind == "finite_set":
        for x0 in region.points:
            if not M.is_defined_at(x0):
                return False
            if const_rank(M.eval(x0)) != M.rows:
                return False
        return True
    if region.kind != "cofinite":
        raise ValueError("rank region must be finite_set or cofinite")
    for row in M.entries:
        for r in row:
            if not strip_points(r.den, region.excluded).is_constant():
                return False
    cleared_rows = []
    for row in M.entries:
        d = Poly.one("exact")
        for r in row:
            d = d * (r.den // poly_gcd(d, r.den))
        cleared_rows.append([(r.num * (d // r.den)) for r in row])
    cleared = PolyMatrix(cleared_rows, "exact")
    return _poly_full_rank_in_cofinite(cleared, M.rows, region.excluded)


def rational_full_col_rank_in(M: RatMatrix, region: RegionSpec) -> bool:
    return rational_full_row_rank_in(M.transpose(), region)


@dataclass(frozen=True)
class LinearizationReport:
    """Outcome of the three-part spectral check."""

    is_linearization: bool
    rank_condition: bool
    pole_match: bool
    zero_match: bool
    witness: object = None
    padding: int | None = None
    grade: int | None = None

    def __post_init__(self):
        expected = self.rank_condition and self.pole_match and self.zero_match
        if self.is_linearization != expected:
            raise ValueError("is_linearization must mirror the three sub-flags")

    def to_jsonable(self):
        return {
            "is_linearization": self.is_linearization,
            "rank_condition": self.rank_condition,
            "pole_match": self.pole_match,
            "zero_match": self.zero_match,
            "witness": None if self.witness is None else str(self.witness),
            "padding": self.padding,
            "grade": self.grade,
        }


def _rational_invariant_chain(G: RatMatrix):
    """Reduced invariant pairs (eps_i, psi_i) with s_i(N)/d = eps_i/psi_i."""
    N, d = G.clear_denominators()
    factors = smith_invariant_factors(N)
    chain = []
    for s in factors:
        g = poly_gcd(s, d)
        chain.append(((s // g).monic(), (d // g).monic()))
    return chain


def _positive_mults_at(chain, x0):
    mults = [multiplicity_at(p, x0) for p in chain if not p.is_zero]
    return sorted(m for m in mults if m > 0)


def _chains_match(chain_a, chain_b, region: RegionSpec):
    """Equality of elementary-divisor multisets over the region.

    Both arguments are divisibility chains (lists of monic polynomials,
    each dividing the next).  Returns (ok, witness).
    """
    if region.kind == "finite_set":
        for x0 in region.points:
            ma = _positive_mults_at(chain_a, x0)
            mb = _positive_mults_at(chain_b, x0)
            if ma != mb:
                return False, _Witness(x0, ma, mb)
        return True, None
    stripped_a = [
        q for q in (strip_points(p, region.excluded) for p in chain_a)
        if not q.is_constant()
    ]
    stripped_b = [
        q for q in (strip_points(p, region.excluded) for p in chain_b)
        if not q.is_constant()
    ]
    if stripped_a == stripped_b:
        return True, None
    return False, _chain_witness(stripped_a, stripped_b, region)


def _chain_witness(stripped_a, stripped_b, region: RegionSpec):
    """A concrete mismatch point when one is rational, else the factor pair."""
    candidates = set()
    for p in stripped_a + stripped_b:
        roots, _resid = exact_linear_roots(p)
        candidates.update(r for r, _m in roots)
    for x0 in sorted(candidates, key=lambda c: (c.re, c.im)):
        if x0 not in region:
            continue
        ma = _positive_mults_at(stripped_a, x0)
        mb = _positive_mults_at(stripped_b, x0)
        if ma != mb:
            return _Witness(x0, ma, mb)
    return (
        "chains differ inside an irrational factor: "
        f"{[str(p) for p in stripped_a]} vs {[str(p) for p in stripped_b]}"
    )


class _Witness:
    """First mismatching point with the two multiplicity multisets."""

    __slots__ = ("point", "expected", "got")

    def __init__(self, point, expected, got):
        self.point = point
        self.expected = expected
        self.got = got

    def __repr__(self):
        return f"point {self.point}: expected {self.expected}, got {self.got}"

    __str__ = __repr__


def check_linearization_in(
    P: SystemMatrix, G: RatMatrix, region: RegionSpec
) -> LinearizationReport:
    """Spectral verification that P linearizes G over the region.

    Requires P minimal in the region (PreconditionNotMinimal otherwise).
    The three verdict components are the normal-rank identity, the pole
    comparison (state block vs. G) and the zero comparison (whole pencil
    vs. G).
    """
    if region.kind not in ("finite_set", "cofinite"):
        raise ValueError("region must be finite_set or cofinite")
    pencil = P.pencil()
    q, r = P.d.shape
    s_rows = q - G.rows
    s_cols = r - G.cols
    if s_rows != s_cols or s_rows < 0:
        return LinearizationReport(
            is_linearization=False,
            rank_condition=False,
            pole_match=False,
            zero_match=False,
            witness="incompatible sizes: no nonnegative padding makes the "
            "transfer function shape match",
        )
    padding = s_rows
    if not is_minimal_in(P, region):
        raise PreconditionNotMinimal()
    rank_ok = normal_rank(pencil) == normal_rank(G) + P.n + padding
    g_chain = _rational_invariant_chain(G)
    zero_chain_g = [eps for eps, _psi in g_chain]
    pole_chain_g = [psi for _eps, psi in reversed(g_chain)]
    if P.n > 0:
        state_chain = smith_invariant_factors(P.a)
    else:
        state_chain = []
    pole_ok, pole_witness = _chains_match(pole_chain_g, state_chain, region)
    pencil_chain = smith_invariant_factors(pencil)
    zero_ok, zero_witness = _chains_match(zero_chain_g, pencil_chain, region)
    witness = None
    if not pole_ok:
        witness = pole_witness
    elif not zero_ok:
        witness = zero_witness
    return LinearizationReport(
        is_linearization=rank_ok and pole_ok and zero_ok,
        rank_condition=rank_ok,
        pole_match=pole_ok,
        zero_match=zero_ok,
        witness=witness,
        padding=padding,
    )


def check_linearization_at_infinity(
    P: SystemMatrix, G: RatMatrix, g: int
) -> LinearizationReport:
    """P linearizes G at infinity of grade g: check rev_1 P against rev_g G at 0."""
    rev = P.reversed()
    rev_g = G.reverse(g)
    report = check_linearization_in(rev, rev_g, RegionSpec.finite_set([0]))
    return LinearizationReport(
        is_linearization=report.is_linearization,
        rank_condition=report.rank_condition,
        pole_match=report.pole_match,
        zero_match=report.zero_match,
        witness=report.witness,
        padding=report.padding,
        grade=g,
    )
