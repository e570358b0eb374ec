"""Quadrature grids for representation spaces and for the groups themselves.

Every axis is uniform in an internal coordinate (the node value itself, its
logarithm, or a periodic angle), which is what makes dilation and rotation
orbits act as plain index shifts.  Weights are one dimensional Lebesgue
weights in the physical variable; grid builders multiply in the area or
Haar density factors so that ``integrate(grid, values)`` is a plain
weighted sum.

The lattice structure also powers ``lattice_interpolate``, the shared
table interpolation used by the representation action and the transform
kernels (linear or cubic, periodic axes wrap, queries outside the covered
window return zero).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .groups import GroupTag, HaarSide

__all__ = [
    "Axis",
    "Grid",
    "GridFunction",
    "uniform_axis",
    "log_axis",
    "periodic_axis",
    "build_halfline_grid",
    "build_plane_grid",
    "build_cone_grid",
    "build_group_grid",
    "integrate",
    "lattice_interpolate",
    "minkowski_quadratic",
    "write_grid_csv",
    "read_grid_csv",
    "CONE_SECTORS",
]


@dataclass(frozen=True, eq=False)
class Axis:
    """A 1-D quadrature axis, uniform in ``coords``.

    ``nodes`` are the physical values, ``coords`` the uniform internal
    coordinate (equal to nodes for linear axes, log(nodes) for radial
    ones), ``weights`` the Lebesgue weights in the physical variable.
    ``period`` is the coordinate period for angle axes, else None.
    """

    name: str
    nodes: np.ndarray
    coords: np.ndarray
    weights: np.ndarray
    period: float | None = None

    @property
    def spacing(self) -> float:
        return float(self.coords[1] - self.coords[0])

    def __len__(self) -> int:
        return len(self.nodes)


def uniform_axis(name: str, lo: float, hi: float, n: int) -> Axis:
    """Linear axis with trapezoid weights."""
    if n < 2:
        raise ValueError("need at least two nodes per axis")
    nodes = np.linspace(lo, hi, n)
    h = nodes[1] - nodes[0]
    w = np.full(n, h)
    w[0] *= 0.5
    w[-1] *= 0.5
    return Axis(name, nodes, nodes.copy(), w)


def log_axis(name: str, lo: float, hi: float, n: int) -> Axis:
    """Log-spaced axis; trapezoid in log plus the d(node)=node*d(log) factor."""
    if lo <= 0 or hi <= lo:
        raise ValueError("log axis needs 0 < lo < hi")
    if n < 2:
        raise ValueError("need at least two nodes per axis")
    coords = np.linspace(np.log(lo), np.log(hi), n)
    nodes = np.exp(coords)
    h = coords[1] - coords[0]
    w = np.full(n, h)
    w[0] *= 0.5
    w[-1] *= 0.5
    return Axis(name, nodes, coords, w * nodes)


def periodic_axis(name: str, n: int, period: float = 2.0 * np.pi) -> Axis:
    """n equally weighted nodes on [0, period)."""
    if n < 2:
        raise ValueError("need at least two nodes per axis")
    h = period / n
    nodes = np.arange(n) * h
    return Axis(name, nodes, nodes.copy(), np.full(n, h), period=period)


@dataclass(eq=False)
class Grid:
    """Flattened tensor-product quadrature grid.

    ``nodes`` has shape (n,) for 1-D domains and (n, 2) for planar ones,
    flattened in C order over ``axes``.  ``weights`` already contain every
    density factor (area element, Haar density), so integrals are plain
    dot products with ``weights``.
    """

    domain: str
    nodes: np.ndarray
    weights: np.ndarray
    axes: tuple[Axis, ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(ax) for ax in self.axes)

    def axis(self, name: str) -> Axis:
        for ax in self.axes:
            if ax.name == name:
                return ax
        raise KeyError(f"grid has no axis named {name!r}")


@dataclass(eq=False)
class GridFunction:
    """Samples of a function on a grid (flat, C order over the grid axes)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.size,):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid size {self.grid.size}"
            )

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * np.abs(self.values) ** 2)))


def integrate(grid: Grid, values: np.ndarray):
    """Integral of sampled values against the grid measure."""
    values = np.asarray(values)
    if values.shape[0] != grid.size:
        raise ValueError("values do not match grid size")
    return np.tensordot(grid.weights, values, axes=(0, 0))


# ---------------------------------------------------------------------------
# representation-space grids


def build_halfline_grid(sign: int, n: int, s_min: float, s_max: float) -> Grid:
    """Log-spaced grid on the positive or negative half line."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    ax = log_axis("abs_freq", s_min, s_max, n)
    return Grid(
        domain="halfline",
        nodes=sign * ax.nodes,
        weights=ax.weights.copy(),
        axes=(ax,),
        meta={"sign": sign},
    )


def build_plane_grid(n_r: int, n_angle: int, r_min: float, r_max: float) -> Grid:
    """Polar grid on an annulus of the punctured plane (area weights)."""
    rax = log_axis("log_radius", r_min, r_max, n_r)
    pax = periodic_axis("angle", n_angle)
    r = rax.nodes[:, None]
    phi = pax.nodes[None, :]
    nodes = np.stack(
        [(r * np.cos(phi)).ravel(), (r * np.sin(phi)).ravel()], axis=-1
    )
    w = (rax.weights[:, None] * pax.weights[None, :] * r).ravel()
    return Grid(domain="plane", nodes=nodes, weights=w, axes=(rax, pax))


# chart of each open cone of the Minkowski plane: embedding and the sign
# with which a boost of rapidity t shifts the chart rapidity u -> u + sign*t
CONE_SECTORS = {
    "right": (lambda r, u: (r * np.cosh(u), r * np.sinh(u)), +1),
    "left": (lambda r, u: (-r * np.cosh(u), r * np.sinh(u)), -1),
    "up": (lambda r, u: (r * np.sinh(u), r * np.cosh(u)), +1),
    "down": (lambda r, u: (r * np.sinh(u), -r * np.cosh(u)), -1),
}


def build_cone_grid(
    sector: str, n_r: int, n_u: int, r_min: float, r_max: float, u_max: float
) -> Grid:
    """Hyperbolic-polar grid on one open cone x1^2 - x2^2 = +-r^2.

    r is the Minkowski pseudo-radius, u the chart rapidity; the area
    element is r dr du exactly as in the circular polar case.
    """
    if sector not in CONE_SECTORS:
        raise ValueError(f"unknown cone sector {sector!r}")
    emb, boost_sign = CONE_SECTORS[sector]
    rax = log_axis("log_radius", r_min, r_max, n_r)
    uax = uniform_axis("rapidity", -u_max, u_max, n_u)
    r = rax.nodes[:, None]
    u = uax.nodes[None, :]
    x1, x2 = emb(r, u)
    nodes = np.stack([x1.ravel(), x2.ravel()], axis=-1)
    w = (rax.weights[:, None] * uax.weights[None, :] * r).ravel()
    return Grid(
        domain="cone",
        nodes=nodes,
        weights=w,
        axes=(rax, uax),
        meta={"sector": sector, "boost_sign": boost_sign},
    )


def minkowski_quadratic(points: np.ndarray) -> np.ndarray:
    """The quadratic form x1^2 - x2^2, vectorized over trailing dim 2."""
    points = np.asarray(points)
    return points[..., 0] ** 2 - points[..., 1] ** 2


# ---------------------------------------------------------------------------
# group grids


def build_group_grid(
    tag: GroupTag | str,
    *,
    n_trans: int,
    n_dil: int,
    trans_max: float,
    dil_log_max: float,
    n_angle: int | None = None,
    angle_max: float | None = None,
    haar: HaarSide | str = HaarSide.LEFT,
    dil_log_center: float = 0.0,
) -> Grid:
    """Tensor grid over the group with Haar weights folded in.

    Translation axes run over [-trans_max, trans_max], the dilation axis is
    log-spaced on [exp(c - dil_log_max), exp(c + dil_log_max)] with
    c = dil_log_center (zero by default; shift it so a compactly supported
    dilation profile ends on the window edge instead of mid-cell).  sim2
    gets a full periodic rotation axis of n_angle nodes; paff a boost axis
    on [-angle_max, angle_max].  Node layout is C order over the axes, with
    columns (b, a) or (b1, b2, a, angle).
    """
    tag = GroupTag(tag)
    haar = HaarSide(haar)
    aax = log_axis(
        "dilation",
        np.exp(dil_log_center - dil_log_max),
        np.exp(dil_log_center + dil_log_max),
        n_dil,
    )
    if tag is GroupTag.AFFINE:
        bax = uniform_axis("trans", -trans_max, trans_max, n_trans)
        axes = (bax, aax)
        cols = np.meshgrid(bax.nodes, aax.nodes, indexing="ij")
        nodes = np.stack([c.ravel() for c in cols], axis=-1)
        wleb = (bax.weights[:, None] * aax.weights[None, :]).ravel()
    else:
        if n_angle is None:
            raise ValueError("planar group grids need n_angle")
        b1 = uniform_axis("trans1", -trans_max, trans_max, n_trans)
        b2 = uniform_axis("trans2", -trans_max, trans_max, n_trans)
        if tag is GroupTag.SIM2:
            gax = periodic_axis("rotation", n_angle)
        else:
            if angle_max is None:
                raise ValueError("paff group grids need angle_max")
            gax = uniform_axis("boost", -angle_max, angle_max, n_angle)
        axes = (b1, b2, aax, gax)
        cols = np.meshgrid(b1.nodes, b2.nodes, aax.nodes, gax.nodes, indexing="ij")
        nodes = np.stack([c.ravel() for c in cols], axis=-1)
        wleb = (
            b1.weights[:, None, None, None]
            * b2.weights[None, :, None, None]
            * aax.weights[None, None, :, None]
            * gax.weights[None, None, None, :]
        ).ravel()
    a_col = nodes[:, -2] if tag is not GroupTag.AFFINE else nodes[:, 1]
    if haar is HaarSide.LEFT:
        dens = a_col ** (-2.0 if tag is GroupTag.AFFINE else -3.0)
    else:
        dens = 1.0 / a_col
    return Grid(
        domain="group",
        nodes=nodes,
        weights=wleb * dens,
        axes=axes,
        meta={"tag": tag, "haar": haar, "lebesgue": wleb},
    )


# ---------------------------------------------------------------------------
# lattice interpolation


def _cubic_weights(t: np.ndarray):
    """Catmull-Rom weights for stencil offsets (-1, 0, 1, 2)."""
    t2 = t * t
    t3 = t2 * t
    return (
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    )


def _linear_weights(t: np.ndarray):
    return (1.0 - t, t)


def axis_stencil(ax: Axis, query_coords: np.ndarray, order: int = 3):
    """Index stencil along one axis: (indices, weights, inside) per offset.

    ``indices`` has shape query.shape + (k,) with k = order + 1 stencil
    points; queries outside a non-periodic axis are flagged in ``inside``
    (their indices are clamped so gathers stay legal).
    """
    if order not in (1, 3):
        raise ValueError("only linear (1) and cubic (3) stencils supported")
    n = len(ax)
    t = (np.asarray(query_coords) - ax.coords[0]) / ax.spacing
    if ax.period is not None:
        t = np.mod(t, n)
        base = np.floor(t).astype(np.int64)
        frac = t - base
        inside = np.ones(t.shape, dtype=bool)
        offs = (0, 1) if order == 1 else (-1, 0, 1, 2)
        idx = np.stack([np.mod(base + o, n) for o in offs], axis=-1)
    else:
        eps = 1e-9
        inside = (t >= -eps) & (t <= n - 1 + eps)
        t = np.clip(t, 0.0, float(n - 1))
        base = np.minimum(np.floor(t).astype(np.int64), n - 2)
        frac = t - base
        offs = (0, 1) if order == 1 else (-1, 0, 1, 2)
        idx = np.stack([np.clip(base + o, 0, n - 1) for o in offs], axis=-1)
    wfun = _linear_weights if order == 1 else _cubic_weights
    wts = np.stack(wfun(frac), axis=-1)
    # snap roundoff-level weights to exact zero so queries that land on a
    # lattice node (common when two log axes share a spacing) produce a
    # one-hot stencil that lattice_interpolate can skip over
    wts[np.abs(wts) < 1e-12] = 0.0
    return idx, wts, inside


def lattice_interpolate(
    axes: tuple[Axis, ...],
    table: np.ndarray,
    queries: tuple[np.ndarray, ...],
    order: int = 3,
) -> np.ndarray:
    """Interpolate ``table`` (sampled on the axes' lattice) at query coords.

    ``table`` has shape batch + lattice, where lattice are the trailing
    dims matching ``axes``.  Each query array has the same shape Q; when
    the table carries batch dimensions, Q must start with them (each batch
    row is interpolated at its own points).  Values requested outside a
    non-periodic axis come back as zero.
    """
    k = len(axes)
    if k != len(queries):
        raise ValueError("one query array per axis required")
    lat_shape = table.shape[table.ndim - k:]
    if lat_shape != tuple(len(ax) for ax in axes):
        raise ValueError("table lattice dims do not match axes")
    batch_shape = table.shape[: table.ndim - k]
    q = np.broadcast_arrays(*queries)
    qshape = q[0].shape
    stencils = [axis_stencil(ax, qq, order=order) for ax, qq in zip(axes, q)]
    inside = stencils[0][2]
    for st in stencils[1:]:
        inside = inside & st[2]

    tab = table.reshape((-1,) + lat_shape)
    nbatch = tab.shape[0]
    if batch_shape:
        if qshape[: len(batch_shape)] != batch_shape:
            raise ValueError("query leading dims must match table batch dims")
        bidx = np.arange(nbatch).reshape(batch_shape + (1,) * (len(qshape) - len(batch_shape)))
        bidx = np.broadcast_to(bidx, qshape)
    else:
        bidx = np.zeros(qshape, dtype=np.int64)

    flat_tab = tab.reshape(-1)
    strides = [1] * k
    for ax_i in range(k - 2, -1, -1):
        strides[ax_i] = strides[ax_i + 1] * lat_shape[ax_i + 1]
    out = np.zeros(qshape, dtype=table.dtype)
    npts = order + 1
    _stencil_sweep(stencils, strides, npts, flat_tab, out, 0, bidx * (strides[0] * lat_shape[0]), None)
    return np.where(inside, out, 0)


def _stencil_sweep(stencils, strides, npts, flat_tab, out, ax_i, flat, w) -> None:
    """Depth-first pass over stencil offsets for lattice_interpolate.

    Shares the partial index and weight products across offset
    combinations; a weight slot that is zero everywhere (exact node
    hits) prunes its whole subtree.
    """
    idx, wts, _ = stencils[ax_i]
    last = ax_i + 1 == len(stencils)
    for st_i in range(npts):
        ws = wts[..., st_i]
        wn = ws if w is None else w * ws
        if not wn.any():
            continue
        fn = flat + idx[..., st_i] * strides[ax_i]
        if last:
            out[...] += wn * np.take(flat_tab, fn)
        else:
            _stencil_sweep(stencils, strides, npts, flat_tab, out, ax_i + 1, fn, wn)


# ---------------------------------------------------------------------------
# CSV round trip


def write_grid_csv(grid: Grid, path) -> None:
    """Write nodes and weights as CSV (x1[,x2],weight)."""
    nodes = np.atleast_2d(grid.nodes.T).T
    ncol = nodes.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i + 1}" for i in range(ncol)] + ["weight"])
        for row, wt in zip(nodes, grid.weights):
            w.writerow([f"{v:.17g}" for v in row] + [f"{wt:.17g}"])


def read_grid_csv(path, domain: str = "csv") -> Grid:
    """Read a grid written by write_grid_csv (axes structure is not kept)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    ncol = len(header) - 1
    arr = np.array([[float(v) for v in row] for row in data])
    nodes = arr[:, 0] if ncol == 1 else arr[:, :ncol]
    return Grid(domain=domain, nodes=nodes, weights=arr[:, ncol], axes=())
