"""Built-in scalar functions for nonlinear terms, plus sampling/target regions.

The registry keeps the functions the CLI can sample without user-supplied
data: exp, sin, the principal square root (undefined on the branch cut
along the negative real axis), and simple poles 1/(x - c).  Each entry
knows where it can be evaluated, so residual checks can refuse points
outside the domain instead of returning garbage.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FunctionNotEvaluable


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar complex function with an explicit evaluability domain."""

    name: str
    label: str
    _fn: object
    _evaluable: object

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        if not self._evaluable(z):
            raise FunctionNotEvaluable(z, self.label)
        return self._fn(z)

    def evaluable(self, z: complex) -> bool:
        return self._evaluable(complex(z))


def _always(_z: complex) -> bool:
    return True


def build_function(name: str, **params) -> ScalarFunction:
    """Instantiate a registry function by name.

    Known names: ``exp``, ``sin``, ``sqrt`` (principal branch, not evaluable
    on the negative real axis), and ``inv_linear`` with parameter ``pole``
    (the function 1/(x - pole)).
    """
    if name == "exp":
        return ScalarFunction("exp", "exp", cmath.exp, _always)
    if name == "sin":
        return ScalarFunction("sin", "sin", cmath.sin, _always)
    if name == "sqrt":
        def not_on_cut(z: complex) -> bool:
            return not (z.imag == 0.0 and z.real < 0.0)

        return ScalarFunction("sqrt", "sqrt", cmath.sqrt, not_on_cut)
    if name == "inv_linear":
        if "pole" not in params:
            raise ConfigError("inv_linear requires a 'pole' parameter")
        pole = complex(params["pole"])

        def fn(z: complex) -> complex:
            return 1.0 / (z - pole)

        def away_from_pole(z: complex) -> bool:
            return z != pole

        return ScalarFunction(
            "inv_linear", f"inv_linear(pole={pole})", fn, away_from_pole
        )
    raise ConfigError(f"unknown registry function {name!r}")


@dataclass(frozen=True)
class SigmaRegion:
    """The sampling set for AAA: a circle, a segment, or explicit points."""

    kind: str
    center: complex = 0j
    radius: float = 1.0
    start: complex = -1.0 + 0j
    end: complex = 1.0 + 0j
    points: tuple = ()
    num_points: int = 100

    def __post_init__(self):
        if self.kind not in ("unit_circle", "disc", "segment", "points"):
            raise ConfigError(f"unknown sigma region kind {self.kind!r}")
        if self.kind != "points" and self.num_points < 2:
            raise ConfigError("need at least two sample points")

    def sample(self) -> np.ndarray:
        if self.kind == "points":
            return np.asarray(self.points, dtype=complex)
        if self.kind in ("unit_circle", "disc"):
            center = 0j if self.kind == "unit_circle" else complex(self.center)
            radius = 1.0 if self.kind == "unit_circle" else float(self.radius)
            angles = 2.0 * np.pi * np.arange(self.num_points) / self.num_points
            return center + radius * np.exp(1j * angles)
        ts = np.linspace(0.0, 1.0, self.num_points)
        return complex(self.start) + ts * (complex(self.end) - complex(self.start))


@dataclass(frozen=True)
class TargetRegion:
    """Eigenvalue acceptance region: everything, or a closed disc."""

    kind: str = "all"
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in ("all", "disc"):
            raise ConfigError(f"unknown target region kind {self.kind!r}")

    def contains(self, z: complex) -> bool:
        if self.kind == "all":
            return True
        return abs(complex(z) - complex(self.center)) <= float(self.radius)

    def is_empty(self) -> bool:
        return self.kind == "disc" and self.radius < 0
