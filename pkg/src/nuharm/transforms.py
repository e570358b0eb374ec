"""Operator-valued Fourier, Wigner and Weyl transforms on the three groups.

The operator Fourier transform of a function f on the group is

    F_e f  =  const * integral  f(g) rho(g) K^e  d(left Haar)

with rho the representation attached to a label, K the Plancherel weight
of :mod:`nuharm.representations`, and e an exponent that interpolates the
classical choices (e = 1/2 gives the Plancherel isometry, e = 1/p' drives
the Schatten membership analysis, e = 0 the plain integrated transform).
The per-group constants

    affine: (2 pi)^-1/2      sim2: (2 pi)^-1      paff: (2 pi)^-1/2

make the Plancherel identity, the inversion formula and the Moyal-type
equalities hold simultaneously and are folded into every transform here.

Two independent evaluation routes are provided.  ``group_fourier``
evaluates the closed-form kernel: a partial Fourier transform in the
translation variable, sampled along the dilation/rotation orbit that
connects a row node to a column node.  ``dense_group_fourier`` assembles
the defining integral literally from representation matrices; it is the
slow reference used to validate the closed form.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import Grid, integrate, lattice_interpolate
from .groups import GroupTag, element, inverse, multiply
from .representations import (
    RepLabel,
    _require_match,
    accumulate_representation,
    duflo_moore_weight,
)

__all__ = [
    "FOURIER_CONST",
    "KernelMatrix",
    "OperatorField",
    "WignerField",
    "SymbolField",
    "partial_fourier_translation",
    "group_fourier",
    "dense_group_fourier",
    "group_translation_table",
    "wigner_transform",
    "fourier_via_wigner",
    "weyl_quadratic_form",
    "inversion_reconstruct",
]

FOURIER_CONST = {
    GroupTag.AFFINE: (2.0 * np.pi) ** -0.5,
    GroupTag.SIM2: (2.0 * np.pi) ** -1.0,
    GroupTag.PAFF: (2.0 * np.pi) ** -0.5,
}


@dataclass(eq=False)
class KernelMatrix:
    """Sampled kernel k(x_i, y_j) of one operator-valued transform value."""

    label: RepLabel
    row_grid: Grid
    col_grid: Grid
    entries: np.ndarray
    dm_exponent: float


@dataclass(eq=False)
class OperatorField:
    """A kernel stack over the group grid for each representation label."""

    group_grid: Grid
    rep_grids: dict
    data: dict = field(default_factory=dict)


WignerField = OperatorField
SymbolField = OperatorField


def _group_layout(grid: Grid):
    """Split a group grid into translation axes and orbit-cell axes."""
    tag = grid.meta["tag"]
    if tag is GroupTag.AFFINE:
        taxes, caxes = grid.axes[:1], grid.axes[1:]
    else:
        taxes, caxes = grid.axes[:2], grid.axes[2:]
    nt = int(np.prod([len(ax) for ax in taxes]))
    nc = int(np.prod([len(ax) for ax in caxes]))
    return tag, taxes, caxes, nt, nc


def _trans_weights(taxes) -> np.ndarray:
    w = taxes[0].weights
    for ax in taxes[1:]:
        w = np.outer(w, ax.weights).ravel()
    return w


def _trans_nodes(taxes) -> np.ndarray:
    if len(taxes) == 1:
        return taxes[0].nodes
    g1, g2 = np.meshgrid(taxes[0].nodes, taxes[1].nodes, indexing="ij")
    return np.stack([g1.ravel(), g2.ravel()], axis=-1)


def partial_fourier_translation(group_grid: Grid, values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Fourier transform in the translation variable only.

    Returns a table of shape (n_points, n_dil) for the affine group and
    (n_points, n_dil, n_angle) for the planar ones, normalized unitarily:
    (2 pi)^{-1/2} per translation dimension, with phase e^{-i b s},
    e^{-i b.x}, or e^{+i (x1 b1 - x2 b2)} (Minkowski pairing) by group.
    """
    tag, taxes, caxes, nt, nc = _group_layout(group_grid)
    vals = np.asarray(values).reshape(nt, nc)
    wb = _trans_weights(taxes)
    pts = np.asarray(points, dtype=float)
    if tag is GroupTag.AFFINE:
        phase = np.exp(-1j * np.outer(pts, taxes[0].nodes))
        const = (2.0 * np.pi) ** -0.5
    else:
        bb = _trans_nodes(taxes)
        if tag is GroupTag.SIM2:
            phase = np.exp(-1j * (np.outer(pts[:, 0], bb[:, 0]) + np.outer(pts[:, 1], bb[:, 1])))
        else:
            phase = np.exp(1j * (np.outer(pts[:, 0], bb[:, 0]) - np.outer(pts[:, 1], bb[:, 1])))
        const = (2.0 * np.pi) ** -1.0
    table = const * ((phase * wb) @ vals)
    cell_shape = tuple(len(ax) for ax in caxes)
    return table.reshape((len(pts),) + cell_shape)


def _orbit_queries(label: RepLabel, rep_grid: Grid):
    """Orbit coordinates (dilation log, angle) connecting node pairs.

    Entry [i, j] gives the cell coordinates (log a*, angle*) of the unique
    orbit element mapping row node x_i to column node y_j, i.e. the point
    where the partial Fourier table must be sampled for kernel entry (i, j).
    """
    if label.tag is GroupTag.AFFINE:
        c = rep_grid.axes[0].coords
        la = c[None, :] - c[:, None]
        return (la,), np.exp(la), np.exp(c)
    rax = rep_grid.axis("log_radius")
    lr = np.broadcast_to(rep_grid.axes[0].coords[:, None], rep_grid.shape).ravel()
    la = lr[None, :] - lr[:, None]
    if label.tag is GroupTag.SIM2:
        x = rep_grid.nodes
        ang = np.arctan2(x[:, 1], x[:, 0])
        astar_angle = ang[:, None] - ang[None, :]
    else:
        u = np.broadcast_to(rep_grid.axes[1].nodes[None, :], rep_grid.shape).ravel()
        d = rep_grid.meta["boost_sign"]
        astar_angle = d * (u[:, None] - u[None, :])
    return (la, astar_angle), np.exp(la), np.exp(lr)


def _kernel_factors(label: RepLabel, astar: np.ndarray, rownorm: np.ndarray, e: float) -> np.ndarray:
    """Geometric factors of the closed-form kernel (everything but F1)."""
    if label.tag is GroupTag.AFFINE:
        return astar ** (e - 1.5) * rownorm[:, None] ** (e - 1.0)
    if label.tag is GroupTag.SIM2:
        return astar ** (2.0 * e - 3.0) * rownorm[:, None] ** (2.0 * e - 2.0)
    return (
        (2.0 * np.pi) ** (0.5 - e)
        * astar ** (2.0 * e - 3.0)
        * rownorm[:, None] ** (2.0 * e - 2.0)
    )


def group_fourier(
    label: RepLabel,
    group_grid: Grid,
    values: np.ndarray,
    dm_exponent: float,
    rep_grid: Grid,
    order: int = 3,
) -> KernelMatrix:
    """Operator Fourier transform via the closed-form kernel.

    The kernel at (x, y) is the translation-variable Fourier transform of
    f evaluated at frequency x and at the orbit cell carrying x to y,
    times a power of the orbit dilation and of the Plancherel weight; the
    cell is looked up in the partial Fourier table by ``order``-degree
    lattice interpolation and pairs whose orbit falls outside the sampled
    window contribute zero.
    """
    _require_match(label, rep_grid)
    tag, taxes, caxes, nt, nc = _group_layout(group_grid)
    if tag is not label.tag:
        raise ValueError("group grid and label belong to different groups")
    table = partial_fourier_translation(group_grid, values, rep_grid.nodes)
    queries, astar, rownorm = _orbit_queries(label, rep_grid)
    f1 = lattice_interpolate(caxes, table, queries, order=order)
    # the group constant, the 2 pi from undoing the partial-Fourier
    # normalization and the Plancherel-weight constant cancel into the
    # per-group factor carried by _kernel_factors
    entries = f1 * _kernel_factors(label, astar, rownorm, dm_exponent)
    return KernelMatrix(label, rep_grid, rep_grid, entries, dm_exponent)


def _element_at(tag: GroupTag, node: np.ndarray):
    if tag is GroupTag.AFFINE:
        return element(tag, node[0], node[1])
    return element(tag, node[:2], node[2], node[3])


def dense_group_fourier(
    label: RepLabel,
    group_grid: Grid,
    values: np.ndarray,
    dm_exponent: float,
    rep_grid: Grid,
    order: int = 3,
) -> KernelMatrix:
    """Operator Fourier transform assembled literally from the definition.

    Accumulates weight * f(g) * rho(g) one group node at a time and
    applies the Plancherel weight power afterwards.  Costs
    O(n_group * N^2) and exists as the independent reference for
    ``group_fourier``; keep the grids small.
    """
    _require_match(label, rep_grid)
    tag = group_grid.meta["tag"]
    if tag is not label.tag:
        raise ValueError("group grid and label belong to different groups")
    const = FOURIER_CONST[tag]
    acc = np.zeros((rep_grid.size, rep_grid.size), dtype=complex)
    vals = np.asarray(values)
    w = group_grid.weights
    for idx in range(group_grid.size):
        amp = const * w[idx] * vals[idx]
        if amp == 0.0:
            continue
        accumulate_representation(
            label, _element_at(tag, group_grid.nodes[idx]), rep_grid, amp, acc, order=order
        )
    kappa = duflo_moore_weight(label, rep_grid) ** dm_exponent
    entries = acc * (kappa / rep_grid.weights)[None, :]
    return KernelMatrix(label, rep_grid, rep_grid, entries, dm_exponent)


def group_translation_table(
    group_grid: Grid,
    values: np.ndarray,
    order: int = 3,
    rows: slice | np.ndarray | None = None,
) -> np.ndarray:
    """Table T[j, i] = values interpolated at the product inverse(x_j) * x_i.

    Products falling outside the grid window count as zero, matching the
    compact-support reading of functions sampled on the window.  ``rows``
    restricts j to a slice or index array of the grid so callers that
    reduce over i can bound peak memory at block x size instead of
    size^2.
    """
    tag = group_grid.meta["tag"]
    nodes = group_grid.nodes
    rnodes = nodes if rows is None else nodes[rows]
    if tag is GroupTag.AFFINE:
        rows_el = element(tag, rnodes[:, 0][:, None], rnodes[:, 1][:, None])
        cols = element(tag, nodes[None, :, 0], nodes[None, :, 1])
        prod = multiply(inverse(rows_el), cols)
        queries = (prod.translation, np.log(prod.dilation))
    else:
        rows_el = element(tag, rnodes[:, None, :2], rnodes[:, None, 2], rnodes[:, None, 3])
        cols = element(tag, nodes[None, :, :2], nodes[None, :, 2], nodes[None, :, 3])
        prod = multiply(inverse(rows_el), cols)
        queries = (
            prod.translation[..., 0],
            prod.translation[..., 1],
            np.log(prod.dilation),
            prod.angle,
        )
    table = np.asarray(values).reshape(group_grid.shape)
    return lattice_interpolate(group_grid.axes, table, queries, order=order)


def wigner_transform(
    group_grid: Grid,
    f_values: np.ndarray,
    g_values: np.ndarray,
    rep_grids: dict,
    order: int = 3,
    block: int = 64,
) -> OperatorField:
    """Matrix-valued Wigner transform of a pair of group functions.

    W(x) = const * integral f(y) g(inverse(y) x) rho(y) dmu(y), evaluated
    on every group node as a kernel stack per representation label.  The
    representation matrices are assembled in blocks and contracted by
    matrix products, so cost scales as n_group^2 * N^2.
    """
    tag = group_grid.meta["tag"]
    const = FOURIER_CONST[tag]
    trans = group_translation_table(group_grid, g_values, order=order)
    coef = const * (group_grid.weights * np.asarray(f_values))[:, None] * trans
    coef = np.ascontiguousarray(coef.T)  # [i, j] = w_j f_j g(x_j^-1 x_i)
    n = group_grid.size
    out = OperatorField(group_grid, dict(rep_grids))
    for label, grid in rep_grids.items():
        nrep = grid.size
        data = np.zeros((n, nrep * nrep), dtype=complex)
        chunk = np.empty((block, nrep, nrep), dtype=complex)
        for lo in range(0, n, block):
            hi = min(lo + block, n)
            chunk[: hi - lo] = 0.0
            for k in range(lo, hi):
                accumulate_representation(
                    label, _element_at(tag, group_grid.nodes[k]), grid,
                    1.0, chunk[k - lo], order=order,
                )
            data += coef[:, lo:hi] @ chunk[: hi - lo].reshape(hi - lo, -1)
        data = data.reshape(n, nrep, nrep)
        data *= (1.0 / grid.weights)[None, None, :]
        out.data[label] = data
    return out


def fourier_via_wigner(
    label: RepLabel,
    group_grid: Grid,
    f_values: np.ndarray,
    g_values: np.ndarray,
    rep_grid: Grid,
    order: int = 3,
    block: int = 256,
) -> KernelMatrix:
    """Haar integral of the Wigner field divided by the integral of g.

    Exchanging the two integrals collapses the field average to a single
    weighted Fourier assembly, so this stays affordable at resolutions
    where materializing the whole field would not be.  In the continuum
    the result equals the dm_exponent = 0 Fourier transform of f; the
    agreement of the two routes on a common grid is a strong joint test
    of the Wigner geometry and the kernel calculus.
    """
    f_values = np.asarray(f_values)
    n = group_grid.size
    # rows where f vanishes never reach the output, so skip their mass
    live = np.flatnonzero(f_values)
    g_mass = np.zeros(n, dtype=complex)  # per-row integral of translated g
    for lo in range(0, live.size, block):
        rows = live[lo : lo + block]
        trans = group_translation_table(group_grid, g_values, order=order, rows=rows)
        g_mass[rows] = trans @ group_grid.weights
    total = integrate(group_grid, np.asarray(g_values))
    scaled = f_values * g_mass / total
    return dense_group_fourier(label, group_grid, scaled, 0.0, rep_grid, order=order)


def weyl_quadratic_form(
    symbols: OperatorField,
    f_values: np.ndarray,
    g_values: np.ndarray,
    order: int = 3,
) -> complex:
    """Pairing of an operator symbol field with the Wigner transform.

    Q = sum over labels of integral Tr(sigma(x)^* W(f,g)(x) K) dmu(x),
    the weak-sense action of the Weyl quantization of the symbols on the
    pair (f, g).
    """
    wig = wigner_transform(
        symbols.group_grid, f_values, g_values, symbols.rep_grids, order=order
    )
    wx = symbols.group_grid.weights
    total = 0.0 + 0.0j
    for label, sig in symbols.data.items():
        grid = symbols.rep_grids[label]
        kappa = duflo_moore_weight(label, grid)
        pair_w = grid.weights[:, None] * (grid.weights * kappa)[None, :]
        total += np.einsum("x,xuv,xuv->", wx, np.conj(sig), wig.data[label] * pair_w)
    return complex(total)


def inversion_reconstruct(group_grid: Grid, kernels: dict, order: int = 3) -> np.ndarray:
    """Reconstruct group-side samples from dm_exponent = 1 kernel matrices.

    f(x) = const * sum over labels of Tr(rho(x)^* F_1 f), evaluated for
    every grid node by gathering each kernel along the dilation orbit of
    the node's cell and contracting with the translation phases.
    """
    tag, taxes, caxes, nt, nc = _group_layout(group_grid)
    const = FOURIER_CONST[tag]
    mesh = np.meshgrid(*(ax.nodes for ax in caxes), indexing="ij")
    a0 = mesh[0].ravel()
    la0 = np.log(a0)
    ang0 = mesh[1].ravel() if len(caxes) > 1 else None
    bs = _trans_nodes(taxes)
    out = np.zeros((nt, nc), dtype=complex)
    for label, km in kernels.items():
        if km.dm_exponent != 1.0:
            raise ValueError("inversion needs dm_exponent = 1 kernels")
        grid = km.row_grid
        nrep = grid.size
        if tag is GroupTag.AFFINE:
            c = grid.axes[0].coords
            queries = (c[:, None] + la0[None, :],)
            table = km.entries
        else:
            table = km.entries.reshape((nrep,) + grid.shape)
            lr = np.broadcast_to(grid.axes[0].coords[:, None], grid.shape).ravel()
            sec = np.broadcast_to(grid.axes[1].nodes[None, :], grid.shape).ravel()
            shift_sign = 1.0 if tag is GroupTag.SIM2 else grid.meta["boost_sign"]
            queries = (
                lr[:, None] + la0[None, :],
                sec[:, None] - shift_sign * ang0[None, :],
            )
        gathered = lattice_interpolate(grid.axes, table, queries, order=order)
        if tag is GroupTag.AFFINE:
            phases = np.exp(1j * np.outer(bs, grid.nodes))
            pref = np.sqrt(a0)
        elif tag is GroupTag.SIM2:
            x = grid.nodes
            phases = np.exp(1j * (np.outer(bs[:, 0], x[:, 0]) + np.outer(bs[:, 1], x[:, 1])))
            pref = a0
        else:
            x = grid.nodes
            phases = np.exp(-1j * (np.outer(bs[:, 0], x[:, 0]) - np.outer(bs[:, 1], x[:, 1])))
            pref = a0
        out += pref[None, :] * (phases @ (grid.weights[:, None] * gathered))
    return (const * out).ravel()
