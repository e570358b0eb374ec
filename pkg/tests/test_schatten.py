"""Singular-value functionals: Schatten norms, clamping, mixed norms."""
from __future__ import annotations

import numpy as np
import pytest

from nuharm import (
    OperatorField,
    build_group_grid,
    build_halfline_grid,
    duflo_moore_weight,
    labels_for,
    mixed_norm,
    schatten_norm,
    singular_values,
    weighted_matrix,
)


def test_weighted_matrix_literal():
    k = np.array([[1.0, 2.0], [3.0, 4.0]])
    out = weighted_matrix(k, np.array([4.0, 1.0]), np.array([1.0, 9.0]))
    np.testing.assert_allclose(out, [[2.0, 12.0], [3.0, 12.0]])


def test_weighted_frobenius_equals_weighted_sum():
    rng = np.random.default_rng(3)
    k = rng.standard_normal((5, 7)) + 1j * rng.standard_normal((5, 7))
    w = rng.uniform(0.5, 2.0, size=5)
    v = rng.uniform(0.5, 2.0, size=7)
    frob2 = np.sum(np.abs(weighted_matrix(k, w, v)) ** 2)
    direct = np.sum(w[:, None] * v[None, :] * np.abs(k) ** 2)
    assert frob2 == pytest.approx(direct, rel=1e-13)


def test_singular_values_known_matrix():
    s = singular_values(np.array([[3.0, 0.0], [4.0, 0.0]]))
    np.testing.assert_allclose(s.values, [5.0, 0.0], atol=1e-14)


def test_schatten_norm_orders():
    mat = np.diag([3.0, 4.0])
    assert schatten_norm(mat, 1.0) == pytest.approx(7.0)
    assert schatten_norm(mat, 2.0) == pytest.approx(5.0)
    assert schatten_norm(mat, np.inf) == pytest.approx(4.0)
    spectrum = singular_values(mat)
    assert schatten_norm(spectrum, 1.0) == pytest.approx(7.0)


def test_schatten_norm_rejects_orders_below_one():
    with pytest.raises(ValueError):
        schatten_norm(np.eye(2), 0.5)


def test_trace_norm_clamps_roundoff_singular_values():
    # a rank-one matrix carries a second singular value at roundoff level;
    # p < 2 norms would otherwise pick up sqrt-of-noise contributions
    u = np.linspace(1.0, 2.0, 40)
    mat = np.outer(u, u)
    assert schatten_norm(mat, 1.0) == pytest.approx(np.sum(u * u), rel=1e-12)


def make_field(values_per_node):
    gg = build_group_grid("affine", n_trans=4, n_dil=3, trans_max=1.0, dil_log_max=0.5)
    label = labels_for("affine")[0]
    rg = build_halfline_grid(+1, 5, 0.5, 2.0)
    stack = np.broadcast_to(
        values_per_node, (gg.size, rg.size, rg.size)
    ).astype(complex)
    return OperatorField(gg, {label: rg}, {label: stack.copy()}), gg, label, rg


def test_mixed_norm_diagonal_oracle():
    d = np.array([1.0, 2.0, 0.5, 3.0, 1.5])
    field, gg, label, rg = make_field(np.diag(d))
    kappa = duflo_moore_weight(label, rg)
    for p in (1.0, 2.0, 4.0):
        sing = rg.weights * d * kappa ** (1.0 / p)
        expect = (np.sum(gg.weights) * np.sum(sing**p)) ** (1.0 / p)
        assert mixed_norm(field, p) == pytest.approx(expect, rel=1e-12)


def test_mixed_norm_sup_has_no_twist():
    d = np.array([1.0, 2.0, 0.5, 3.0, 1.5])
    field, gg, label, rg = make_field(np.diag(d))
    expect = np.max(rg.weights * d)
    assert mixed_norm(field, np.inf) == pytest.approx(expect, rel=1e-12)


def test_mixed_norm_twist_override():
    d = np.array([1.0, 2.0, 0.5, 3.0, 1.5])
    field, gg, label, rg = make_field(np.diag(d))
    sing = rg.weights * d
    expect = (np.sum(gg.weights) * np.sum(sing**2)) ** 0.5
    assert mixed_norm(field, 2.0, twist_exponent=0.0) == pytest.approx(expect, rel=1e-12)


def test_mixed_norm_validates_input():
    with pytest.raises(TypeError):
        mixed_norm(np.eye(3), 2.0)
    field, *_ = make_field(np.eye(5))
    with pytest.raises(ValueError):
        mixed_norm(field, 0.5)
