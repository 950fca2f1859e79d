"""Exception types shared across the package."""


class RatlinError(Exception):
    """Base class for all package-specific errors."""


class ZeroDenominator(RatlinError):
    """A rational function was built with an identically zero denominator."""


class NotDefinedAt(RatlinError):
    """Evaluation was requested at a pole of some entry."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"matrix is not defined at {point}")


class AllZeroMatrix(RatlinError):
    """An operation needed at least one nonzero entry."""


class RootsNotRational(RatlinError):
    """Not all roots of a factor could be certified exactly.

    Carries the exactly certified points plus the leftover factors whose
    roots are irrational; callers that can work with the factors
    symbolically should catch this and use both attributes.
    """

    def __init__(self, points, residual_factors):
        self.points = points
        self.residual_factors = residual_factors
        super().__init__(
            "irrational structure points remain in %d factor(s)"
            % len(residual_factors)
        )


class SingularStateMatrix(RatlinError):
    """The state block of a system matrix is not regular."""


class PreconditionNotMinimal(RatlinError):
    """A spectral verification was attempted on a non-minimal system matrix."""

    def __init__(self, witness=None, message=None):
        self.witness = witness
        super().__init__(message or "system matrix is not minimal in the requested region")


class DimensionMismatch(RatlinError):
    """Block dimensions are not conformal."""


class StateNotRegular(RatlinError):
    """The supplied state block has identically zero determinant."""


class DualBasisNotFullRankInRegion(RatlinError):
    """A K or N block drops rank (or is undefined) inside the requested region."""


class NonUniformRowDegrees(RatlinError):
    """A dual basis does not have all row degrees equal."""


class ReversedBasisRankDeficient(RatlinError):
    """A reversed block is rank deficient at zero.

    ``reason`` identifies the offending block; verification reports surface
    it verbatim.
    """

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class NotSharpDegree(RatlinError):
    """deg(D) != deg(N1) + deg(N2) + 1 for the supplied pencil data."""


class RealizationNotMinimal(RatlinError):
    """The constant state-space realization is not controllable/observable."""


class UnimodularCompletionFailed(RatlinError):
    """No constant completion of a minimal basis to a unimodular matrix was found."""


class ToleranceNotReached(RatlinError):
    """AAA hit the support budget before reaching the requested tolerance."""

    def __init__(self, max_m, best_error):
        self.max_m = max_m
        self.best_error = best_error
        super().__init__(
            f"tolerance not reached with m={max_m} supports (best error {best_error:.3e})"
        )


class DegenerateSamples(RatlinError):
    """The sample set cannot support a barycentric approximation."""


class SingularTermPencil(RatlinError):
    """A nonlinear term pencil C - lambda*D is singular; the disjointness test does not apply."""


class NonSquare(RatlinError):
    """A square pencil was required."""


class FunctionNotEvaluable(RatlinError):
    """A registry function cannot be evaluated at the requested point."""

    def __init__(self, point, name=""):
        self.point = point
        self.name = name
        super().__init__(f"function {name or '<anonymous>'} not evaluable at {point}")


class ConfigError(RatlinError):
    """The pipeline configuration is invalid."""


class ProblemParseError(RatlinError):
    """The problem document is malformed."""
