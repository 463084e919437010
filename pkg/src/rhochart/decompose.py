"""Factor a unitary into the one phase-one rotation chart.

Works by successive elimination: for each block label of the all-singleton
canonical order, a single inverse block (a complex Givens rotation whose
phase absorbs the argument of the targeted entry) is applied on the left to
zero one upper off-diagonal entry.  Earlier zeros are preserved by the order,
so the residue is diagonal and becomes the trailing phase matrix.  The
recovered parameter vector is exactly the chart's, so this is the
constructive inverse of ``make_opor_chart``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .degeneracy import DegeneracyPattern, canonical_order
from .words import Word, evaluate, make_opor_chart

TWO_PI = 2.0 * math.pi

#: entries below this modulus count as already eliminated
ELIM_EPS = 1e-14


class NotUnitaryError(ValueError):
    """Input matrix is too far from unitary to decompose."""


@dataclass(frozen=True)
class DecompositionResult:
    """Chart word reproducing the input, plus the reconstruction error."""

    word: Word
    residual: float


def decompose(u: np.ndarray, tol: float = numerics.DEFAULT_TOL) -> DecompositionResult:
    """Factor ``u`` into phase-rotation blocks and a trailing diagonal.

    ``u`` must satisfy ``is_unitary(u, tol)``; inputs farther away are
    rejected rather than projected.  All recovered angles land in
    [0, pi/2] and phases in [0, 2*pi).  At block angles 0 or pi/2 the block
    phase is not determined by the matrix; it is set to 0.
    """
    u = numerics.as_matrix(u)
    if not numerics.is_unitary(u, tol):
        raise NotUnitaryError(f"input is not unitary within {tol}")
    n = u.shape[0]
    t = u.copy()
    params: list[float] = []
    for a, b in canonical_order(DegeneracyPattern.singletons(n)):
        i, j = min(a, b), max(a, b)
        tij = t[i - 1, j - 1]
        tjj = t[j - 1, j - 1]
        if abs(tij) < ELIM_EPS:
            delta, theta = 0.0, 0.0
        else:
            theta = math.atan2(abs(tij), abs(tjj))
            if abs(tjj) < ELIM_EPS:
                delta = 0.0
            elif a == i:
                delta = float(np.angle(tij) - np.angle(tjj)) % TWO_PI
            else:
                delta = float(np.angle(tjj) - np.angle(tij)) % TWO_PI
        params.extend([delta, theta])
        # left-apply the inverse block: undo the phase on row a, then rotate
        t[a - 1, :] *= np.exp(-1j * delta)
        c, s = math.cos(theta), math.sin(theta)
        row_i = c * t[i - 1, :] - s * t[j - 1, :]
        row_j = s * t[i - 1, :] + c * t[j - 1, :]
        t[i - 1, :] = row_i
        t[j - 1, :] = row_j
    params.extend(float(np.angle(t[k, k])) % TWO_PI for k in range(n))
    word = make_opor_chart(n, params)
    residual = numerics.max_abs_diff(u, evaluate(word))
    return DecompositionResult(word=word, residual=residual)


def reconstruct(r: DecompositionResult) -> np.ndarray:
    """Evaluate the recovered chart word."""
    return evaluate(r.word)
