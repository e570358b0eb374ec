"""Group operations for the three dilation groups used throughout the package.

Each group is a set of affine maps of the line or the plane:

* ``affine``: x -> b + a*x on the real line, parameters (b, a) with a > 0.
* ``sim2``: x -> b + a*R(theta)*x on the plane, R a rotation.
* ``paff``: x -> b + a*L(theta)*x on the plane, L a hyperbolic boost.

All three carry a left Haar measure with a nontrivial modular function,
which is the reason the operator-valued transforms downstream need the
positive weight operators and exponent bookkeeping they have.

Elements are stored in coordinates (translation, dilation, angle) and all
operations broadcast over leading array dimensions, so batches of elements
are first-class.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "GroupTag",
    "HaarSide",
    "GroupElement",
    "element",
    "identity",
    "multiply",
    "inverse",
    "haar_density",
    "modular_function",
    "plane_action",
    "rotation_matrix",
    "boost_matrix",
]

TWO_PI = 2.0 * np.pi


class GroupTag(str, Enum):
    """Which of the three groups an object belongs to."""

    AFFINE = "affine"
    SIM2 = "sim2"
    PAFF = "paff"


class HaarSide(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def _as_tag(tag: GroupTag | str) -> GroupTag:
    return GroupTag(tag)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """One group element or a broadcastable batch of them.

    ``translation`` has a trailing dimension of size 2 for the planar
    groups and none for the affine group.  ``angle`` is the rotation
    angle for sim2 (kept in [0, 2*pi)), the boost rapidity for paff,
    and None for the affine group.
    """

    tag: GroupTag
    translation: np.ndarray
    dilation: np.ndarray
    angle: np.ndarray | None = None

    def __post_init__(self):
        if np.any(np.asarray(self.dilation) <= 0):
            raise ValueError("dilation parameter must be positive")
        if self.tag is GroupTag.AFFINE:
            if self.angle is not None:
                raise ValueError("affine elements carry no angle")
        elif self.angle is None:
            raise ValueError(f"{self.tag.value} elements need an angle")

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return np.shape(self.dilation)


def element(tag: GroupTag | str, translation, dilation, angle=None) -> GroupElement:
    """Build a GroupElement from array-likes, normalizing dtypes and angles."""
    tag = _as_tag(tag)
    b = np.asarray(translation, dtype=float)
    a = np.asarray(dilation, dtype=float)
    if tag is GroupTag.AFFINE:
        if angle is not None:
            raise ValueError("affine elements carry no angle")
        return GroupElement(tag, b, a, None)
    if angle is None:
        raise ValueError(f"{tag.value} elements need an angle")
    if b.shape[-1:] != (2,):
        raise ValueError("planar translation needs a trailing dimension of 2")
    t = np.asarray(angle, dtype=float)
    if tag is GroupTag.SIM2:
        t = np.mod(t, TWO_PI)
    return GroupElement(tag, b, a, t)


def identity(tag: GroupTag | str) -> GroupElement:
    tag = _as_tag(tag)
    if tag is GroupTag.AFFINE:
        return element(tag, 0.0, 1.0)
    return element(tag, np.zeros(2), 1.0, 0.0)


def rotation_matrix(theta) -> np.ndarray:
    """Rotation matrices, shape (..., 2, 2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def boost_matrix(theta) -> np.ndarray:
    """Hyperbolic boost matrices [[cosh, sinh], [sinh, cosh]], shape (..., 2, 2)."""
    c, s = np.cosh(theta), np.sinh(theta)
    return np.stack([np.stack([c, s], -1), np.stack([s, c], -1)], -2)


def _linear_part(g: GroupElement) -> np.ndarray:
    if g.tag is GroupTag.SIM2:
        m = rotation_matrix(g.angle)
    else:
        m = boost_matrix(g.angle)
    return np.asarray(g.dilation)[..., None, None] * m


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product g*h (composition of the affine maps, g applied last)."""
    if g.tag is not h.tag:
        raise ValueError("cannot multiply elements of different groups")
    if g.tag is GroupTag.AFFINE:
        b = g.translation + g.dilation * h.translation
        return element(g.tag, b, g.dilation * h.dilation)
    moved = np.einsum("...ij,...j->...i", _linear_part(g), h.translation)
    return element(
        g.tag,
        g.translation + moved,
        g.dilation * h.dilation,
        g.angle + h.angle,
    )


def inverse(g: GroupElement) -> GroupElement:
    if g.tag is GroupTag.AFFINE:
        return element(g.tag, -g.translation / g.dilation, 1.0 / g.dilation)
    ang = -np.asarray(g.angle)
    mat = rotation_matrix(ang) if g.tag is GroupTag.SIM2 else boost_matrix(ang)
    minv = mat / np.asarray(g.dilation)[..., None, None]
    b = -np.einsum("...ij,...j->...i", minv, g.translation)
    return element(g.tag, b, 1.0 / g.dilation, ang)


def haar_density(g: GroupElement, side: HaarSide | str = HaarSide.LEFT) -> np.ndarray:
    """Density of the chosen Haar measure against Lebesgue measure db da dtheta.

    Left: 1/a^2 (affine), 1/a^3 (planar groups).  Right: 1/a for all three.
    """
    side = HaarSide(side)
    a = np.asarray(g.dilation, dtype=float)
    if side is HaarSide.RIGHT:
        return 1.0 / a
    if g.tag is GroupTag.AFFINE:
        return a**-2.0
    return a**-3.0


def modular_function(g: GroupElement) -> np.ndarray:
    """Ratio of left to right Haar: Delta(g) = 1/a (affine) or 1/a^2 (planar)."""
    a = np.asarray(g.dilation, dtype=float)
    if g.tag is GroupTag.AFFINE:
        return 1.0 / a
    return a**-2.0


def plane_action(g: GroupElement, x) -> np.ndarray:
    """Apply the defining affine map of g to points x.

    Affine elements act on real numbers, planar elements on points of R^2
    (trailing dimension 2).  Broadcasts over batch dimensions on both sides.
    """
    x = np.asarray(x, dtype=float)
    if g.tag is GroupTag.AFFINE:
        return g.translation + g.dilation * x
    moved = np.einsum("...ij,...j->...i", _linear_part(g), x)
    return g.translation + moved
