"""Irreducible representations of the three groups on concrete grids.

Each group acts on L^2 of a frequency-side domain: the affine group on the
two half lines, sim2 on the punctured plane, paff on the four open cones
of the Minkowski plane.  The action combines a multiplicative character in
the translation parameter with a dilation/rotation/boost of the argument:

* affine, sign s:  (b, a) . u(s) = sqrt(a) e^{-i b s} u(a s)
* sim2:            (b, a, th) . phi(x) = a e^{-i b.x} phi(a R(-th) x)
* paff:            (b, a, th) . phi(x) = a e^{+i <x;b>} phi(a L(-th) x)

with <x;y> = x1 y1 - x2 y2 the Minkowski pairing.  On the lattice grids of
:mod:`nuharm.grids` the argument map is a uniform shift of the internal
coordinates, so applying a representation is a phase times a stencil
interpolation.

Because the groups are nonunimodular, the Plancherel machinery needs an
unbounded positive weight on each representation space (|s|, |x|^2, or
|<x;x>|/2pi).  ``duflo_moore_weight`` evaluates it on a grid and
``apply_duflo_moore`` applies its powers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid, GridFunction, lattice_interpolate, axis_stencil
from .groups import GroupElement, GroupTag

__all__ = [
    "RepLabel",
    "DufloMooreSpec",
    "labels_for",
    "rep_grid_matches",
    "duflo_moore_weight",
    "apply_duflo_moore",
    "apply_representation",
    "accumulate_representation",
    "representation_matrix",
]


@dataclass(frozen=True)
class DufloMooreSpec:
    """A power of the Plancherel weight attached to one representation."""

    label: "RepLabel"
    exponent: float

    def evaluate(self, grid: Grid) -> np.ndarray:
        return duflo_moore_weight(self.label, grid) ** self.exponent


@dataclass(frozen=True)
class RepLabel:
    """Names one irreducible in the Plancherel decomposition of a group."""

    tag: GroupTag
    space: str

    def __str__(self) -> str:
        return f"{self.tag.value}:{self.space}"


_LABELS = {
    GroupTag.AFFINE: ("plus", "minus"),
    GroupTag.SIM2: ("plane",),
    GroupTag.PAFF: ("right", "left", "up", "down"),
}


def labels_for(tag: GroupTag | str) -> tuple[RepLabel, ...]:
    tag = GroupTag(tag)
    return tuple(RepLabel(tag, s) for s in _LABELS[tag])


def rep_grid_matches(label: RepLabel, grid: Grid) -> bool:
    """Whether a grid is a valid carrier for the labelled representation."""
    if label.tag is GroupTag.AFFINE:
        sign = +1 if label.space == "plus" else -1
        return grid.domain == "halfline" and grid.meta.get("sign") == sign
    if label.tag is GroupTag.SIM2:
        return grid.domain == "plane"
    return grid.domain == "cone" and grid.meta.get("sector") == label.space


def _require_match(label: RepLabel, grid: Grid) -> None:
    if not rep_grid_matches(label, grid):
        raise ValueError(f"grid domain {grid.domain!r} does not carry {label}")


def duflo_moore_weight(label: RepLabel, grid: Grid) -> np.ndarray:
    """The positive Plancherel weight on the representation grid.

    |s| on the half lines, |x|^2 on the plane, |x1^2 - x2^2| / 2pi on the
    cones.  Radial grids evaluate it from the exact log coordinates.
    """
    _require_match(label, grid)
    if label.tag is GroupTag.AFFINE:
        return np.abs(grid.nodes)
    rlog = grid.axis("log_radius")
    shape = grid.shape
    r2 = np.exp(2.0 * rlog.coords)
    r2 = np.broadcast_to(r2[:, None], shape).ravel()
    if label.tag is GroupTag.SIM2:
        return r2.copy()
    return r2 / (2.0 * np.pi)


def apply_duflo_moore(label: RepLabel, fn: GridFunction, exponent: float) -> GridFunction:
    """Multiply a grid function by the weight raised to ``exponent``."""
    kappa = duflo_moore_weight(label, fn.grid)
    return GridFunction(fn.grid, fn.values * kappa**exponent)


def _shift_and_phase(label: RepLabel, g: GroupElement, grid: Grid):
    """Per-axis coordinate shifts of the argument map and the scalar phase.

    Returns (shifts, phase, prefactor): the representation sends samples u
    to prefactor * phase * u(evaluated at coords + shifts).
    """
    a = float(g.dilation)
    if label.tag is GroupTag.AFFINE:
        s = grid.nodes
        phase = np.exp(-1j * float(g.translation) * s)
        return (np.log(a),), phase, np.sqrt(a)
    b = np.asarray(g.translation, dtype=float)
    x = grid.nodes
    if label.tag is GroupTag.SIM2:
        phase = np.exp(-1j * (x[:, 0] * b[0] + x[:, 1] * b[1]))
        return (np.log(a), -float(g.angle)), phase, a
    phase = np.exp(1j * (x[:, 0] * b[0] - x[:, 1] * b[1]))
    d = grid.meta["boost_sign"]
    return (np.log(a), -d * float(g.angle)), phase, a


def apply_representation(
    label: RepLabel, g: GroupElement, fn: GridFunction, order: int = 3
) -> GridFunction:
    """Act with the representation of a single group element on samples."""
    _require_match(label, fn.grid)
    grid = fn.grid
    shifts, phase, pref = _shift_and_phase(label, g, grid)
    axes = grid.axes
    mesh = np.meshgrid(*(ax.coords for ax in axes), indexing="ij")
    queries = tuple(m + s for m, s in zip(mesh, shifts))
    table = fn.values.reshape(grid.shape)
    moved = lattice_interpolate(axes, table, queries, order=order).ravel()
    return GridFunction(grid, pref * phase * moved)


def accumulate_representation(
    label: RepLabel,
    g: GroupElement,
    grid: Grid,
    amplitude: complex,
    out: np.ndarray,
    order: int = 3,
) -> None:
    """Add ``amplitude`` times the representation matrix of g into ``out``.

    Row i holds the stencil that evaluates the input at the mapped
    argument of node i, times the phase and dilation prefactor.  Rows
    whose mapped argument leaves the grid window stay zero.  Writing
    straight into a caller-owned accumulator keeps integral assemblies
    over many group elements allocation free.
    """
    shifts, phase, pref = _shift_and_phase(label, g, grid)
    axes = grid.axes
    rows = np.arange(grid.size)
    mesh = np.meshgrid(*(ax.coords for ax in axes), indexing="ij")
    stencils = [
        axis_stencil(ax, (m + s).ravel(), order=order)
        for ax, m, s in zip(axes, mesh, shifts)
    ]
    inside = stencils[0][2]
    for st in stencils[1:]:
        inside = inside & st[2]
    amp = np.where(inside, amplitude * pref * phase, 0.0)
    if len(axes) == 1:
        idx, wts, _ = stencils[0]
        for k in range(idx.shape[-1]):
            np.add.at(out, (rows, idx[:, k]), amp * wts[:, k])
    else:
        (idx1, wts1, _), (idx2, wts2, _) = stencils
        n2 = len(axes[1])
        for k1 in range(idx1.shape[-1]):
            for k2 in range(idx2.shape[-1]):
                cols = idx1[:, k1] * n2 + idx2[:, k2]
                np.add.at(out, (rows, cols), amp * wts1[:, k1] * wts2[:, k2])


def representation_matrix(
    label: RepLabel, g: GroupElement, grid: Grid, order: int = 3
) -> np.ndarray:
    """Dense matrix of the representation acting on value vectors."""
    _require_match(label, grid)
    mat = np.zeros((grid.size, grid.size), dtype=complex)
    accumulate_representation(label, g, grid, 1.0, mat, order=order)
    return mat
