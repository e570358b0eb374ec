"""Singular value functionals of discretized integral operators.

A kernel sampled on quadrature grids becomes an operator on L^2 of those
grids; its singular values are those of the symmetrically weighted matrix
sqrt(w_row) k sqrt(w_col).  ``schatten_norm`` sums their powers,
``mixed_norm`` integrates Schatten norms of an operator field over the
group, with the Plancherel weight twist that makes the mixed norms of the
quadratic transforms finite on a nonunimodular group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .representations import duflo_moore_weight

__all__ = [
    "SingularSpectrum",
    "weighted_matrix",
    "singular_values",
    "schatten_norm",
    "mixed_norm",
]

# relative floor under which singular values are treated as exact zeros
# (they are quadrature noise; powers < 2 would otherwise amplify them)
CLAMP_REL = 1e-14


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values of one weighted kernel matrix, descending."""

    values: np.ndarray

    def norm(self, order: float) -> float:
        return _spectrum_norm(self.values, order)


def weighted_matrix(kernel: np.ndarray, row_weights: np.ndarray, col_weights: np.ndarray) -> np.ndarray:
    """Symmetrically weighted matrix whose SVD approximates the operator's."""
    kernel = np.asarray(kernel)
    return np.sqrt(row_weights)[:, None] * kernel * np.sqrt(col_weights)[None, :]


def singular_values(mat: np.ndarray) -> SingularSpectrum:
    return SingularSpectrum(np.linalg.svd(np.asarray(mat), compute_uv=False))


def _spectrum_norm(s: np.ndarray, order: float) -> float:
    if math.isinf(order):
        return float(s[0]) if len(s) else 0.0
    if order < 1:
        raise ValueError("Schatten order must be >= 1")
    if order < 2 and len(s):
        s = np.where(s < CLAMP_REL * s[0], 0.0, s)
    return float(np.sum(s**order) ** (1.0 / order))


def schatten_norm(mat, order: float) -> float:
    """Schatten norm of a weighted matrix (or a precomputed spectrum)."""
    if isinstance(mat, SingularSpectrum):
        return mat.norm(order)
    return singular_values(mat).norm(order)


def mixed_norm(field, order: float, twist_exponent: float | None = None, block: int = 64) -> float:
    """Group-integrated Schatten norm of an operator field.

    For finite order p this is ( sum_x w_x || W(x) K^t ||_Sp^p )^(1/p)
    with the Plancherel weight twist t = 1/p by default; order=inf takes
    the supremum of operator norms (no twist).  The sum runs over every
    representation label the field carries.
    """
    from .transforms import OperatorField  # local import, avoids a cycle

    if not isinstance(field, OperatorField):
        raise TypeError("mixed_norm expects an OperatorField")
    if math.isinf(order):
        twist = 0.0 if twist_exponent is None else twist_exponent
    else:
        if order < 1:
            raise ValueError("mixed norm order must be >= 1")
        twist = (1.0 / order) if twist_exponent is None else twist_exponent

    wgroup = field.group_grid.weights
    sup = 0.0
    acc = 0.0
    for label, stack in field.data.items():
        grid = field.rep_grids[label]
        wrep = grid.weights
        colscale = np.sqrt(wrep)
        if twist != 0.0:
            colscale = colscale * duflo_moore_weight(label, grid) ** twist
        rowscale = np.sqrt(wrep)
        n = stack.shape[0]
        for lo in range(0, n, block):
            hi = min(lo + block, n)
            wm = rowscale[None, :, None] * stack[lo:hi] * colscale[None, None, :]
            s = np.linalg.svd(wm, compute_uv=False)
            if math.isinf(order):
                sup = max(sup, float(s[:, 0].max(initial=0.0)))
            else:
                if order < 2:
                    floor = CLAMP_REL * s[:, :1]
                    s = np.where(s < floor, 0.0, s)
                acc += float(np.sum(wgroup[lo:hi] * np.sum(s**order, axis=1)))
    if math.isinf(order):
        return sup
    return acc ** (1.0 / order)
