"""Release gate: the ten numbered acceptance checks, one summary line each.

Every test drives the same harness functions the command-line tool uses,
pins the gate tolerance as a literal (so a drift in the default table
fails here), measures wall time against the stated budget, and records
one pass/fail line through the ``acceptance_report`` fixture; the lines
are printed together in the terminal summary.  Gate tolerances are
deliberately looser than the sharp pins in the per-module tests: this
file certifies the advertised contract, not the best achievable figures.
"""

import time

import numpy as np
import pytest

from nuharm import (
    GridFunction,
    apply_representation,
    build_cone_grid,
    build_group_grid,
    build_halfline_grid,
    build_plane_grid,
    cosine_power_integral,
    cosine_power_integral_tail,
    cosine_power_limit,
    dense_group_fourier,
    element,
    group_fourier,
    hilbert_schmidt_crosscheck,
    labels_for,
    multiply,
    oscillation_lower_bound,
    rep_grid_matches,
    weighted_matrix,
)
from nuharm.cli import (
    RunConfig,
    group_law_rows,
    invariance_rows,
    plancherel_inversion_rows,
    sweep_rows,
    weyl_pairing_row,
    wigner_fourier_row,
    wigner_norm_row,
)

GROUPS = ("affine", "sim2", "paff")


def _cfg(**kw) -> RunConfig:
    cfg = RunConfig(subcommand="acceptance", **kw)
    cfg.validate()
    return cfg


def _line(num: int, ok: bool, detail: str, dt: float, budget: float) -> str:
    word = "PASS" if ok else "FAIL"
    return f"criterion {num:02d} {word}  {detail}  [{dt:.1f}s of {budget:.0f}s]"


# ---------------------------------------------------------------------------
# 1. group algebra


def test_criterion_01_group_algebra(rng, acceptance_report):
    cfg = _cfg()
    assert cfg.n_triples_group == 1000
    assert cfg.tolerance("associativity") == 1e-9
    assert cfg.tolerance("inverse") == 1e-9
    t0 = time.monotonic()
    rows = [row for key in GROUPS for row in group_law_rows(key, cfg, rng)]
    dt = time.monotonic() - t0
    worst = max(row.value for row in rows)
    ok = all(row.passed for row in rows) and dt < 1.0
    acceptance_report(
        _line(1, ok, f"group laws, worst residual {worst:.2e} (tol 1e-09)", dt, 1.0)
    )
    assert all(row.passed for row in rows)
    assert dt < 1.0


# ---------------------------------------------------------------------------
# 2. Haar measure and modular function


def test_criterion_02_invariance_and_modular(rng, acceptance_report):
    cfg = _cfg()
    assert cfg.n_draws == 10
    assert cfg.tolerance("left_invariance") == 1e-2
    assert cfg.tolerance("modular_ratio") == 1e-2
    t0 = time.monotonic()
    rows = [row for key in GROUPS for row in invariance_rows(key, cfg, rng)]
    dt = time.monotonic() - t0
    worst = max(row.value for row in rows)
    ok = all(row.passed for row in rows) and dt < 30.0
    acceptance_report(
        _line(2, ok, f"invariance + modular ratio, worst {worst:.2e} (tol 1e-02)", dt, 30.0)
    )
    assert all(row.passed for row in rows)
    assert dt < 30.0


# ---------------------------------------------------------------------------
# 3. representation unitarity and homomorphism
#
# The exact-ratio set holds dilations on the representation's log-radial
# lattice (angles and boosts zero), where the shift snaps to nodes and the
# residual is rounding noise.  Generic elements interpolate, so their
# residual is dominated by the cubic-stencil error, which drops by ~16x
# when the lattice is refined twofold; the gate only demands halving.


def _rep_grid(key: str, doubled: bool):
    if key == "affine":
        return build_halfline_grid(+1, 256 if doubled else 128, 0.5, 12.0)
    if key == "sim2":
        n_r, n_ang = (128, 72) if doubled else (64, 36)
        return build_plane_grid(n_r, n_ang, 0.45, 12.0)
    n_r, n_u = (88, 60) if doubled else (44, 30)
    return build_cone_grid("right", n_r, n_u, 0.54, 10.0, 1.0)


def _rep_profile(key: str, rg) -> GridFunction:
    lr = rg.axes[0].coords
    mid = 0.5 * (lr[0] + lr[-1])
    if key == "affine":
        # narrow in log radius so window truncation stays far below the
        # interpolation error (the halving assertion needs that ordering)
        v = np.exp(-((lr - mid) ** 2) / (2.0 * 0.12**2))
    elif key == "sim2":
        th = rg.axes[1].nodes[None, :]
        v = (
            np.exp(-((lr[:, None] - mid) ** 2) / (2.0 * 0.25**2))
            * (1.0 + 0.3 * np.cos(th))
        ).ravel()
    else:
        u = rg.axes[1].nodes[None, :]
        v = np.exp(
            -((lr[:, None] - mid) ** 2) / (2.0 * 0.25**2) - u**2 / (2.0 * 0.18**2)
        ).ravel()
    fn = GridFunction(rg, v.astype(complex))
    return GridFunction(rg, fn.values / fn.norm())


_GENERIC_SCALES = {
    # translation box, log-dilation box, angle/boost box
    "affine": (2.0, 0.3, None),
    "sim2": (1.0, 0.2, np.pi),
    "paff": (1.5, 0.2, 0.15),
}


def _one_generic(key: str, rng: np.random.Generator):
    b_scale, la_scale, ang_scale = _GENERIC_SCALES[key]
    if key == "affine":
        trans, ang = float(rng.uniform(-b_scale, b_scale)), None
    else:
        trans = rng.uniform(-b_scale, b_scale, size=2)
        ang = float(rng.uniform(-ang_scale, ang_scale))
    return element(key, trans, float(np.exp(rng.uniform(-la_scale, la_scale))), ang)


def _exact_pairs(key: str, rng: np.random.Generator, h: float):
    b_scale = _GENERIC_SCALES[key][0]
    pairs = []
    for k1, k2 in ((-3, 1), (-2, 3), (-1, -1), (1, 2), (2, -3), (3, -1)):
        pair = []
        for k in (k1, k2):
            if key == "affine":
                trans, ang = float(rng.uniform(-b_scale, b_scale)), None
            else:
                trans, ang = rng.uniform(-b_scale, b_scale, size=2), 0.0
            pair.append(element(key, trans, float(np.exp(k * h)), ang))
        pairs.append(tuple(pair))
    return pairs


def _law_residuals(label, pairs, fn: GridFunction) -> float:
    worst = 0.0
    for g, h in pairs:
        for el in (g, h):
            moved = apply_representation(label, el, fn)
            worst = max(worst, abs(moved.norm() - fn.norm()) / fn.norm())
        two_step = apply_representation(label, g, apply_representation(label, h, fn))
        one_step = apply_representation(label, multiply(g, h), fn)
        gap = GridFunction(fn.grid, two_step.values - one_step.values)
        worst = max(worst, gap.norm() / fn.norm())
    return worst


def test_criterion_03_representation_laws(rng, acceptance_report):
    details = []
    ok = True
    slowest = 0.0
    for key in GROUPS:
        t0 = time.monotonic()
        label = labels_for(key)[0]
        generic = [(_one_generic(key, rng), _one_generic(key, rng)) for _ in range(8)]
        exact_res = {}
        generic_res = {}
        for doubled in (False, True):
            rg = _rep_grid(key, doubled)
            assert rep_grid_matches(label, rg)
            fn = _rep_profile(key, rg)
            h = float(rg.axes[0].coords[1] - rg.axes[0].coords[0])
            exact_res[doubled] = _law_residuals(label, _exact_pairs(key, rng, h), fn)
            generic_res[doubled] = _law_residuals(label, generic, fn)
        dt = time.monotonic() - t0
        group_ok = (
            exact_res[False] <= 1e-3
            and exact_res[True] <= 1e-3
            and generic_res[False] <= 1e-2
            and generic_res[True] <= 0.5 * generic_res[False]
            and dt < 60.0
        )
        ok = ok and group_ok
        slowest = max(slowest, dt)
        details.append(
            f"{key} exact {exact_res[False]:.1e} generic {generic_res[False]:.1e}"
            f"->{generic_res[True]:.1e}"
        )
        assert exact_res[False] <= 1e-3 and exact_res[True] <= 1e-3
        assert generic_res[False] <= 1e-2
        assert generic_res[True] <= 0.5 * generic_res[False]
        assert dt < 60.0
    acceptance_report(_line(3, ok, "; ".join(details), slowest, 60.0))


# ---------------------------------------------------------------------------
# 4. Plancherel identity / 5. inversion round trip


def test_criterion_04_plancherel(acceptance_report):
    cfg = _cfg(checks=("plancherel",))
    assert cfg.tolerance("plancherel") == 2e-2
    details = []
    ok = True
    slowest = 0.0
    for key in GROUPS:
        t0 = time.monotonic()
        (row,) = plancherel_inversion_rows(key, cfg)
        dt = time.monotonic() - t0
        ok = ok and row.passed and dt < 120.0
        slowest = max(slowest, dt)
        details.append(f"{key} {row.value:.2e}")
        assert row.passed
        assert dt < 120.0
    acceptance_report(
        _line(4, ok, "plancherel (tol 2e-02): " + ", ".join(details), slowest, 120.0)
    )


def test_criterion_05_inversion(acceptance_report):
    cfg = _cfg(checks=("inversion",))
    assert cfg.tolerance("inversion") == 5e-2
    details = []
    ok = True
    slowest = 0.0
    for key in GROUPS:
        t0 = time.monotonic()
        (row,) = plancherel_inversion_rows(key, cfg)
        dt = time.monotonic() - t0
        ok = ok and row.passed and dt < 120.0
        slowest = max(slowest, dt)
        details.append(f"{key} {row.value:.2e}")
        assert row.passed
        assert dt < 120.0
    acceptance_report(
        _line(5, ok, "inversion (tol 5e-02): " + ", ".join(details), slowest, 120.0)
    )


# ---------------------------------------------------------------------------
# 6. Wigner identities: transform-via-Wigner and the mixed-norm bound


def test_criterion_06_wigner_identities(rng, acceptance_report):
    cfg = _cfg()
    assert cfg.tolerance("wigner_fourier") == 2e-2
    assert cfg.tolerance("wigner_norm") == 1.0 + 1e-2
    assert cfg.n_pairs == 10
    t0 = time.monotonic()
    rows = [wigner_fourier_row(key, cfg) for key in GROUPS]
    rows.append(wigner_norm_row(cfg, rng))
    dt = time.monotonic() - t0
    worst_wf = max(row.value for row in rows[:3])
    ok = all(row.passed for row in rows) and dt < 300.0
    acceptance_report(
        _line(
            6,
            ok,
            f"wigner routes worst {worst_wf:.2e} (tol 2e-02), "
            f"norm ratio {rows[3].value:.4f} (tol 1.01)",
            dt,
            300.0,
        )
    )
    assert all(row.passed for row in rows)
    assert dt < 300.0


# ---------------------------------------------------------------------------
# 7. weak pairing bound in the trace-class regime


def test_criterion_07_weyl_pairing_bound(rng, acceptance_report):
    cfg = _cfg()
    assert cfg.n_triples == 50
    assert cfg.tolerance("weyl_pairing") == 1.0 + 2e-2
    t0 = time.monotonic()
    row = weyl_pairing_row(cfg, rng)
    dt = time.monotonic() - t0
    ok = row.passed and dt < 120.0
    acceptance_report(
        _line(7, ok, f"pairing ratio {row.value:.4f} (tol 1.02), 50 triples", dt, 120.0)
    )
    assert row.passed
    assert dt < 120.0


# ---------------------------------------------------------------------------
# 8. divergence rates above threshold, convergence below


def test_criterion_08_divergence_rates(acceptance_report):
    # p = 3 and p = 1.6 pin the conjugate exponents 1.5 and 1.6
    sweeps = (("affine", 3.0), ("sim2", 1.6), ("paff", 3.0))
    thresholds = {"affine": 1.0 / 3.0, "sim2": 0.25, "paff": 5.0 / 12.0}
    details = []
    ok = True
    slowest = 0.0
    for key, p in sweeps:
        cfg = _cfg(group=key, alpha=0.45, p=p)
        assert cfg.tolerance("slope_rel_error") == 5e-2
        t0 = time.monotonic()
        _, rows = sweep_rows(cfg)
        dt = time.monotonic() - t0
        verdict_row, slope_row = rows
        ok = ok and verdict_row.passed and slope_row.passed and dt < 60.0
        slowest = max(slowest, dt)
        details.append(f"{key} slope err {slope_row.value:.2e}")
        assert verdict_row.passed and verdict_row.value == "divergent"
        assert slope_row.passed
        assert dt < 60.0
    for key, p in sweeps:
        cfg = _cfg(group=key, alpha=thresholds[key] - 0.05, p=p)
        t0 = time.monotonic()
        _, rows = sweep_rows(cfg)
        dt = time.monotonic() - t0
        (verdict_row,) = rows
        ok = ok and verdict_row.passed and dt < 60.0
        slowest = max(slowest, dt)
        assert verdict_row.passed and verdict_row.value == "convergent"
        assert dt < 60.0
    acceptance_report(
        _line(
            8, ok, "; ".join(details) + "; below-threshold all convergent", slowest, 60.0
        )
    )


# ---------------------------------------------------------------------------
# 9. oscillatory-integral oracle
#
# The positivity half of this check is satisfiable only for alpha = 0.45:
# for alpha in {0.1, 0.25} the cosine-power primitive itself dips negative
# near x = 3*pi/2, so no positive lower bound exists on [0.5, 1e4].  Those
# two runs are strict expected failures rather than weakened assertions.


def test_criterion_09_oscillatory_oracle(acceptance_report):
    t0 = time.monotonic()
    worst = 0.0
    for alpha in (0.1, 0.25, 0.45):
        full = cosine_power_integral(alpha, 1.0e4) + cosine_power_integral_tail(
            alpha, 1.0e4
        )
        limit = cosine_power_limit(alpha)
        worst = max(worst, abs(full - limit) / limit)
    bound = oscillation_lower_bound(0.45, 0.5, 1.0e4)
    dt = time.monotonic() - t0
    ok = worst <= 1e-3 and bound > 0.0 and dt < 10.0
    acceptance_report(
        _line(
            9,
            ok,
            f"limit gap {worst:.1e} (tol 1e-03); bound(0.45) = {bound:.4f} > 0; "
            "alpha 0.1/0.25 positivity is a strict expected failure",
            dt,
            10.0,
        )
    )
    assert worst <= 1e-3
    assert bound > 0.0
    assert dt < 10.0


@pytest.mark.parametrize("alpha", [0.1, 0.25])
@pytest.mark.xfail(
    strict=True,
    reason="the cosine-power primitive is negative near 3*pi/2 for small "
    "alpha, so no positive lower bound exists on [0.5, 1e4]",
)
def test_criterion_09_small_alpha_positivity_unattainable(alpha):
    assert oscillation_lower_bound(alpha, 0.5, 1.0e4) > 0.0


# ---------------------------------------------------------------------------
# 10. kernel oracle equivalence on tiny commensurate designs


def _masked_gap(label, gg, rg, f, mask) -> float:
    closed = group_fourier(label, gg, f, 0.5, rg)
    dense = dense_group_fourier(label, gg, f, 0.5, rg)
    wc = weighted_matrix(closed.entries * mask, rg.weights, rg.weights)
    wd = weighted_matrix(dense.entries * mask, rg.weights, rg.weights)
    return float(np.linalg.norm(wc - wd) / np.linalg.norm(wd))


def _radial_mask(rg, log_window):
    lr = rg.axes[0].coords
    keep = np.zeros(len(lr), dtype=bool)
    keep[1:-1] = True
    if rg.nodes.ndim > 1 and len(rg.axes) > 1:
        keep = np.broadcast_to(keep[:, None], rg.shape).ravel()
        lr = np.broadcast_to(lr[:, None], rg.shape).ravel()
    mask = keep[:, None] & keep[None, :]
    mask &= np.abs(lr[:, None] - lr[None, :]) < log_window
    return mask.astype(float)


def _tiny_affine():
    gg = build_group_grid("affine", n_trans=8, n_dil=7, trans_max=2.5, dil_log_max=0.45)
    rg = build_halfline_grid(+1, 7, 0.5, 0.5 * np.exp(0.9))
    b, a = gg.nodes[:, 0], gg.nodes[:, 1]
    la = np.log(a)
    f = np.cos(1.5 * b) * np.exp(-(b**2) / (2 * 0.6**2) - la**2 / (2 * 0.1**2))
    f[np.abs(f) < 1e-9 * np.abs(f).max()] = 0.0
    return gg, rg, f, _radial_mask(rg, 0.45 - 0.075)


def _tiny_sim2():
    gg = build_group_grid(
        "sim2", n_trans=8, n_dil=7, n_angle=6, trans_max=2.0, dil_log_max=0.45
    )
    rg = build_plane_grid(7, 6, 0.5, 0.5 * np.exp(0.9))
    bb = gg.nodes[:, :2]
    la = np.log(gg.nodes[:, 2])
    th = gg.nodes[:, 3]
    f = (
        np.cos(1.2 * bb[:, 0])
        * np.exp(-np.sum(bb**2, axis=1) / (2 * 0.5**2) - la**2 / (2 * 0.09**2))
        * np.exp(np.cos(th - 1.0) - 1.0)
    )
    f[np.abs(f) < 1e-7 * np.abs(f).max()] = 0.0
    return gg, rg, f, _radial_mask(rg, 0.45 - 0.075)


def _tiny_paff():
    gg = build_group_grid(
        "paff", n_trans=8, n_dil=7, n_angle=5, trans_max=2.0, dil_log_max=0.45,
        angle_max=0.3,
    )
    rg = build_cone_grid("right", 7, 5, 0.5, 0.5 * np.exp(0.9), 0.3)
    bb = gg.nodes[:, :2]
    la = np.log(gg.nodes[:, 2])
    vt = gg.nodes[:, 3]
    f = (np.cos(1.2 * bb[:, 0]) + np.cos(1.2 * bb[:, 1])) * np.exp(
        -np.sum(bb**2, axis=1) / (2 * 0.5**2)
        - la**2 / (2 * 0.09**2)
        - vt**2 / (2 * 0.08**2)
    )
    f[np.abs(f) < 1e-7 * np.abs(f).max()] = 0.0
    # the rapidity edge rows/cols carry halved trapezoid weights that the
    # continuum-normalized closed form does not see; drop them like the
    # radial edges
    mask = _radial_mask(rg, 0.45 - 0.075)
    keep_u = np.zeros(rg.shape[1], dtype=bool)
    keep_u[1:-1] = True
    keep = np.broadcast_to(keep_u[None, :], rg.shape).ravel()
    mask *= (keep[:, None] & keep[None, :]).astype(float)
    u = np.broadcast_to(rg.axes[1].nodes[None, :], rg.shape).ravel()
    mask *= np.abs(u[:, None] - u[None, :]) < 0.3 - 0.075
    return gg, rg, f, mask


def test_criterion_10_kernel_oracle_equivalence(acceptance_report):
    t0 = time.monotonic()
    worst = 0.0
    for key, build in (("affine", _tiny_affine), ("sim2", _tiny_sim2), ("paff", _tiny_paff)):
        gg, rg, f, mask = build()
        worst = max(worst, _masked_gap(labels_for(key)[0], gg, rg, f, mask))
    report = hilbert_schmidt_crosscheck(
        lambda b, a: np.exp(-(b**2) / 2.0 - np.log(a) ** 2 / (2.0 * 0.25)), 1.5
    )
    dt = time.monotonic() - t0
    ok = worst <= 1e-2 and report.rel_gap <= 3e-2 and dt < 60.0
    acceptance_report(
        _line(
            10,
            ok,
            f"kernel routes worst {worst:.1e} (tol 1e-02), "
            f"norm crosscheck {report.rel_gap:.2e} (tol 3e-02)",
            dt,
            60.0,
        )
    )
    assert worst <= 1e-2
    assert report.rel_gap <= 3e-2
    assert dt < 60.0
