"""Residuals for the associativity-type matrix equations.

Every residual is the max-abs entry of a commutator-like matrix.  The
``residual`` field is scaled by the operand norms (multiplicities of order ten
inflate absolute residuals without signaling failure); the unscaled value is
kept alongside as ``commutator_max`` because negative controls are judged
against it.  A verifier that cannot fail verifies nothing, so the controls
matter as much as the positive checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .configurations import BCnParameters
from .errors import SingularMatrixError
from .prepotential import h_function, metric_B

# Sample points whose pivot matrices are worse-conditioned than this are
# discarded and resampled by the verification drivers: near-singular pivots
# produce meaningless residuals, not counterexamples.
CONDITION_CAP = 1e8

# A pivot counts as singular when its smallest singular value is below this
# fraction of the largest.
_SINGULAR_RTOL = 1e-10


@dataclass(frozen=True)
class WdvvResidualRecord:
    """One residual evaluation: where, which indices, how large, how trustworthy."""

    point: tuple[float, ...]
    indices: tuple[int, ...]
    residual: float
    commutator_max: float
    condition_number: float


def _check_invertible(M: np.ndarray, what: str) -> float:
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] < _SINGULAR_RTOL * sv[0]:
        raise SingularMatrixError(
            f"{what} is numerically singular (smallest/largest singular value "
            f"= {sv[-1]:.3e}/{sv[0]:.3e})"
        )
    return float(sv[0] / sv[-1])


def wdvv_residual(tensor: np.ndarray, B: np.ndarray, i: int, j: int, x=None) -> WdvvResidualRecord:
    """Residual of F_i B^{-1} F_j = F_j B^{-1} F_i.

    ``residual`` is the max-abs entry of the commutator-like matrix divided by
    max(1, ||F_i|| ||B^{-1}|| ||F_j||) in the spectral norm; ``commutator_max``
    is the same entry before scaling.
    """
    cond = _check_invertible(B, "metric B")
    Fi, Fj = tensor[i], tensor[j]
    M = Fi @ np.linalg.solve(B, Fj) - Fj @ np.linalg.solve(B, Fi)
    raw = float(np.abs(M).max())
    scale = max(
        1.0,
        np.linalg.norm(Fi, 2) * np.linalg.norm(np.linalg.inv(B), 2) * np.linalg.norm(Fj, 2),
    )
    pt = tuple(float(v) for v in np.atleast_1d(x)) if x is not None else ()
    return WdvvResidualRecord(pt, (i, j), raw / scale, raw, cond)


def generalized_wdvv_residual(tensor: np.ndarray, i: int, j: int, k: int, x=None) -> WdvvResidualRecord:
    """Residual of F_i F_k^{-1} F_j = F_j F_k^{-1} F_i with pivot F_k."""
    Fk = tensor[k]
    cond = _check_invertible(Fk, f"pivot F_{k}")
    Fi, Fj = tensor[i], tensor[j]
    M = Fi @ np.linalg.solve(Fk, Fj) - Fj @ np.linalg.solve(Fk, Fi)
    raw = float(np.abs(M).max())
    scale = max(
        1.0,
        np.linalg.norm(Fi, 2) * np.linalg.norm(np.linalg.inv(Fk), 2) * np.linalg.norm(Fj, 2),
    )
    pt = tuple(float(v) for v in np.atleast_1d(x)) if x is not None else ()
    return WdvvResidualRecord(pt, (i, j, k), raw / scale, raw, cond)


def commuting_residual(tensor: np.ndarray, i: int, j: int) -> float:
    """Scaled max-abs entry of F_i F_j - F_j F_i (no pivot).

    Intended for the rescaled tensor, whose metric is proportional to the
    identity, and for m = (1, ..., 1) families under the constraint.
    """
    Fi, Fj = tensor[i], tensor[j]
    M = Fi @ Fj - Fj @ Fi
    scale = max(1.0, np.linalg.norm(Fi, 2) * np.linalg.norm(Fj, 2))
    return float(np.abs(M).max()) / scale


def commutator_max(tensor: np.ndarray, i: int, j: int) -> float:
    """Unscaled max-abs entry of F_i F_j - F_j F_i."""
    M = tensor[i] @ tensor[j] - tensor[j] @ tensor[i]
    return float(np.abs(M).max())


def diagonality_report(tensor: np.ndarray, p: BCnParameters, x) -> tuple[float, float]:
    """(max off-diagonal |B_lt|, max |B_ll - m_l h(x)|) for B built from the tensor.

    The off-diagonal part vanishes for every parameter choice; the diagonal
    deviation vanishes exactly under the multiplicity constraint and equals
    m_l * delta * cosh(2 x_l) entrywise when the constraint residual is delta.
    """
    x = np.asarray(x, dtype=float)
    B = metric_B(tensor, x)
    off = B - np.diag(np.diag(B))
    offdiag_max = float(np.abs(off).max()) if p.n > 1 else 0.0
    h = h_function(p, x)
    diag_deviation = float(np.abs(np.diag(B) - p.m_array * h).max())
    return offdiag_max, diag_deviation
