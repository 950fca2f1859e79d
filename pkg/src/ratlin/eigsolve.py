"""Dense generalized eigenvalue solution and eigenpair post-processing.

``qz_solve`` hands a square pencil to the QZ-based generalized eigensolver
and reports every eigenvalue, infinite ones included (beta below 1e-14
relative to alpha maps to the INFINITY marker).  ``recover_and_filter``
turns linearization eigenpairs back into approximate eigenpairs of the
rational matrix: the candidate eigenvector is the leading n-subvector
(the basis has f_0 = 1, so a genuine eigenvector has a nonzero leading
block), the claim is validated by an explicit residual against the exact
recovered rational matrix, and pairs sitting on state-block eigenvalues
are flagged as poles rather than returned as zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .cork import CorkPencil, NlepModel, _recovered_rational
from .errors import NonSquare
from .matrices import PolyMatrix
from .registry import TargetRegion
from .smith import INFINITY

_INF_BETA_RATIO = 1e-14


@dataclass(frozen=True)
class Eigenpair:
    """One generalized eigenvalue with its vectors and residual.

    ``value`` is complex or the INFINITY marker; ``right_vector`` has unit
    2-norm; ``recovered_vector`` is filled by recover_and_filter;
    ``residual`` is relative (scaled by the Frobenius norm of the matrix it
    was measured against).  ``kind`` is "pencil" straight out of qz_solve,
    then "zero" or "pole" after classification.
    """

    value: object
    right_vector: np.ndarray
    residual: float
    recovered_vector: np.ndarray | None = None
    kind: str = "pencil"

    @property
    def is_infinite(self) -> bool:
        return self.value is INFINITY


def _sort_key(pair: Eigenpair):
    if pair.is_infinite:
        return (1, 0.0, 0.0)
    return (0, pair.value.real, pair.value.imag)


def qz_solve(pencil, n_limit: int | None = None) -> list:
    """All generalized eigenpairs of a square linear PolyMatrix.

    Accepts exact or float kind (exact pencils are converted).  Infinite
    eigenvalues carry the INFINITY marker and a residual measured against
    the reversed pencil at 0.
    """
    if isinstance(pencil, CorkPencil):
        pencil = pencil.pencil()
    if not isinstance(pencil, PolyMatrix):
        raise TypeError("qz_solve expects a PolyMatrix pencil")
    if pencil.rows != pencil.cols:
        raise NonSquare(f"pencil is {pencil.rows}x{pencil.cols}")
    p0, p1 = pencil.to_float_pencil()
    if p0.shape[0] == 0:
        return []
    (alpha, beta), vr = scipy.linalg.eig(
        p0, -p1, right=True, homogeneous_eigvals=True
    )
    pairs = []
    norm0 = np.linalg.norm(p0, "fro")
    norm1 = np.linalg.norm(p1, "fro")
    for j in range(len(alpha)):
        v = vr[:, j]
        nv = np.linalg.norm(v)
        if nv == 0:
            continue
        v = v / nv
        if abs(beta[j]) <= _INF_BETA_RATIO * abs(alpha[j]):
            res = float(np.linalg.norm(p1 @ v) / max(norm1, 1e-300))
            pairs.append(Eigenpair(value=INFINITY, right_vector=v, residual=res))
        else:
            lam = complex(alpha[j] / beta[j])
            mat = p0 + lam * p1
            denom = max(norm0 + abs(lam) * norm1, 1e-300)
            res = float(np.linalg.norm(mat @ v) / denom)
            pairs.append(Eigenpair(value=lam, right_vector=v, residual=res))
    pairs.sort(key=_sort_key)
    return pairs


def classify_eigenpairs(pairs, pencil: CorkPencil, model: NlepModel,
                        region: TargetRegion | None = None,
                        pole_tol: float = 1e-8):
    """Split linearization eigenpairs into approximate zeros and flagged poles.

    Returns ``(zeros, poles)``.  Infinite eigenvalues and values outside the
    target region are dropped; values within ``pole_tol`` of a state-block
    eigenvalue are classified as poles.  Each surviving zero gets the
    leading-n recovered vector and a residual against the exact recovered
    rational matrix (evaluated in floating point).
    """
    region = region if region is not None else model.target
    r_exact = _recovered_rational(model, pencil.term_blocks)
    r_float = r_exact.to_float()
    state_eigs = pencil.state_eigenvalues()
    scale = max((abs(z) for z in state_eigs), default=1.0)
    scale = max(scale, 1.0)
    n = pencil.n
    zeros = []
    poles = []
    for pair in pairs:
        if pair.is_infinite:
            continue
        lam = pair.value
        if not region.contains(lam):
            continue
        if state_eigs.size and np.min(np.abs(state_eigs - lam)) <= pole_tol * scale:
            poles.append(replace(pair, kind="pole"))
            continue
        head = pair.right_vector[:n]
        norm_head = np.linalg.norm(head)
        if norm_head == 0:
            continue
        head = head / norm_head
        r_val = np.asarray(r_float.eval(lam), dtype=complex)
        denom = np.linalg.norm(r_val, "fro")
        res = float(np.linalg.norm(r_val @ head) / max(denom, 1e-300))
        zeros.append(
            replace(pair, kind="zero", recovered_vector=head, residual=res)
        )
    return zeros, poles


def recover_and_filter(pairs, pencil: CorkPencil, model: NlepModel,
                       region: TargetRegion | None = None,
                       pole_tol: float = 1e-8) -> list:
    """The approximate-zero eigenpairs only (poles flagged and dropped)."""
    zeros, _poles = classify_eigenpairs(pairs, pencil, model, region, pole_tol)
    return zeros


def residual_against_nonlinear(model: NlepModel, lam: complex, v: np.ndarray) -> float:
    """Relative residual of (lam, v) against the original nonlinear function.

    Uses the registry functions of the model's terms; raises
    FunctionNotEvaluable when lam is outside some term's domain.
    """
    v = np.asarray(v, dtype=complex).ravel()
    f_val = model.eval_nonlinear(lam)
    denom = np.linalg.norm(f_val, "fro") * np.linalg.norm(v)
    return float(np.linalg.norm(f_val @ v) / max(denom, 1e-300))
