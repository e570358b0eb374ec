"""Singular symbol families whose operator Fourier transforms leave Schatten classes.

The profiles built here carry a ``|b|^{-alpha}`` singularity in the translation
variable.  Their partial Fourier transforms reduce to the oscillatory integral

    C(alpha, x) = integral of t^{-alpha} cos(t) over [0, x],

which stays bounded away from zero for large arguments, so the squared
Hilbert-Schmidt norm of the weighted transform kernel is bounded below by a
constant times a power integral in the outer frequency cutoff T.  Above a
group-dependent alpha threshold that power integral diverges, and its truncated
value must grow like T^(e+1); below the threshold it is Cauchy in T.  This
module evaluates the oscillatory integral, the lower-bound constants, the
truncated divergence integrals, and the log-log growth rates, and cross-checks
the affine Hilbert-Schmidt identity against the operator pipeline.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .grids import build_group_grid, build_halfline_grid
from .groups import GroupTag
from .representations import RepLabel, labels_for
from .schatten import schatten_norm, weighted_matrix
from .transforms import group_fourier, partial_fourier_translation

__all__ = [
    "CounterexampleSpec",
    "SweepRecord",
    "HilbertSchmidtReport",
    "cosine_power_integral",
    "cosine_power_integral_tail",
    "cosine_power_limit",
    "oscillation_lower_bound",
    "positive_bound_inner_cutoff",
    "build_singular_profile",
    "affine_profile_partial_fourier",
    "predicted_exponent",
    "divergence_threshold",
    "truncated_divergence_integral",
    "run_divergence_sweep",
    "fit_loglog_slope",
    "classify_growth",
    "write_sweep_csv",
    "hilbert_schmidt_crosscheck",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

# Below this argument the integrand is handled by termwise series integration;
# above it by Gauss-Legendre panels split at multiples of pi.
_SERIES_CUT = 1.0
_TAIL_SWITCH = 1.0e5


# ---------------------------------------------------------------------------
# the oscillatory integral C(alpha, x) = int_0^x t^{-alpha} cos t dt
# ---------------------------------------------------------------------------


def _series_segment(alpha: float, x: np.ndarray) -> np.ndarray:
    """Termwise integral of the cosine series, valid for 0 <= x <= _SERIES_CUT.

    integral_0^x t^{-alpha} cos t dt
        = sum_k (-1)^k x^{2k+1-alpha} / ((2k)! (2k+1-alpha))
    """
    out = np.zeros_like(x)
    if x.size == 0:
        return out
    with np.errstate(divide="ignore"):
        power = np.where(x > 0.0, x ** (1.0 - alpha), 0.0)
    x_sq = x * x
    factorial = 1.0
    sign = 1.0
    for k in range(36):
        if k > 0:
            factorial *= (2 * k - 1) * (2 * k)
            sign = -sign
        term = sign * power / (factorial * (2 * k + 1 - alpha))
        out += term
        if np.max(np.abs(term)) < 1e-18:
            break
        power = power * x_sq
    return out


def _panel_integrals(alpha: float, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Gauss-Legendre panel values of t^{-alpha} cos t over [lo_i, hi_i]."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    t = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    values = np.cos(t) * t ** (-alpha)
    return half * (values @ _GL_WEIGHTS)


def cosine_power_integral(alpha: float, x):
    """Evaluate C(alpha, x) = integral of t^{-alpha} cos t over [0, x].

    The singular end is integrated by the termwise cosine series on
    [0, min(x, 1)]; the oscillatory remainder uses 16-point Gauss-Legendre
    panels split at multiples of pi (absolute accuracy around 1e-12).
    Past x = 1e5 the panel count becomes the cost driver while the
    integration-by-parts remainder is already far below rounding, so large
    upper limits (with alpha > 0) evaluate as limit minus tail instead.

    Parameters
    ----------
    alpha:
        Singularity strength, 0 <= alpha < 1.
    x:
        Scalar or array of nonnegative upper limits.

    Returns
    -------
    float or ndarray matching the shape of ``x``.
    """
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    if flat.size and flat.min() < 0.0:
        raise ValueError("upper limits must be nonnegative")
    out = np.empty_like(flat)

    small = flat <= _SERIES_CUT
    out[small] = _series_segment(alpha, flat[small])

    far = (flat > _TAIL_SWITCH) if alpha > 0.0 else np.zeros_like(small)
    mid = ~small & ~far
    if mid.any():
        queries = flat[mid]
        x_max = queries.max()
        pi_marks = np.pi * np.arange(1, int(x_max / np.pi) + 1)
        cuts = np.unique(
            np.concatenate(
                [[_SERIES_CUT], pi_marks[pi_marks > _SERIES_CUT], queries]
            )
        )
        panels = _panel_integrals(alpha, cuts[:-1], cuts[1:])
        cumulative = np.concatenate([[0.0], np.cumsum(panels)])
        base = _series_segment(alpha, np.array([_SERIES_CUT]))[0]
        idx = np.searchsorted(cuts, queries)
        out[mid] = base + cumulative[idx]

    if far.any():
        limit = cosine_power_limit(alpha)
        out[far] = [
            limit - cosine_power_integral_tail(alpha, float(q)) for q in flat[far]
        ]

    result = out.reshape(arr.shape) if not scalar else float(out[0])
    return result


def cosine_power_integral_tail(alpha: float, x: float, terms: int = 5) -> float:
    """Asymptotic value of the remainder integral of t^{-alpha} cos t over [x, inf).

    Repeated integration by parts gives the divergent-series expansion

        -x^{-alpha} sin x + alpha x^{-alpha-1} cos x
        + alpha (alpha+1) x^{-alpha-2} sin x - ...

    truncated after ``terms`` terms; the truncation error is of the order of
    the first omitted term, so this is accurate to ~x^{-alpha-terms} absolute
    for x much larger than ``terms``.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if x <= 1.0:
        raise ValueError("tail expansion requires x > 1")
    total = 0.0
    coeff = 1.0
    for k in range(terms):
        # d^k/dt^k pattern: the antiderivative alternates sin/cos in pairs.
        phase = math.sin(x) if k % 2 == 0 else math.cos(x)
        pair_sign = -1.0 if k % 4 in (0, 3) else 1.0
        total += pair_sign * coeff * x ** (-alpha - k) * phase
        coeff *= alpha + k
    return total


def cosine_power_limit(alpha: float) -> float:
    """Closed form of the full integral: Gamma(1-alpha) * sin(pi*alpha/2)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return math.gamma(1.0 - alpha) * math.sin(0.5 * math.pi * alpha)


def oscillation_lower_bound(
    alpha: float,
    x_min: float,
    x_max: float,
    n: int = 4096,
) -> float:
    """Positive lower bound of C(alpha, .) on [x_min, x_max].

    Evaluates the integral on an n-point log grid merged with every extremum
    location (odd multiples of pi/2) up to a dense-evaluation horizon.  Beyond
    the horizon the alternating half-period increments bracket all later
    values, so the minimum of the last two extrema is a valid floor; the
    increments are checked to be contracting.  ``x_max`` may be ``math.inf``.

    Raises
    ------
    ValueError
        If the certified minimum is not strictly positive (the bound constant
        the divergence argument needs does not exist on this window), or if
        the envelope is not contracting at the horizon.
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    if not 0.0 < x_min < x_max:
        raise ValueError("window must satisfy 0 < x_min < x_max")
    if n < 16:
        raise ValueError("need at least 16 sample points")

    # keep the dense window affordable, but never let the cap push it below
    # x_min: far windows still get a few dozen periods to certify against
    dense_max = min(x_max, max(1.0e4, 100.0 * x_min))
    dense_max = min(dense_max, max(1.0e6, x_min + 64.0 * math.pi))
    grid = np.geomspace(x_min, dense_max, n)
    k_lo = math.ceil((x_min / math.pi) - 0.5)
    k_hi = math.floor((dense_max / math.pi) - 0.5)
    extrema = (np.arange(max(k_lo, 0), k_hi + 1) + 0.5) * np.pi
    points = np.unique(np.concatenate([grid, extrema]))
    values = cosine_power_integral(alpha, points)
    minimum = float(values.min())

    if x_max > dense_max:
        if extrema.size < 3:
            raise ValueError("window too narrow to certify the tail envelope")
        tail = cosine_power_integral(alpha, extrema[-3:])
        inc_prev = abs(tail[1] - tail[0])
        inc_last = abs(tail[2] - tail[1])
        if inc_last > inc_prev:
            raise ValueError(
                "oscillation envelope is not contracting at the horizon; "
                "increase the dense-evaluation range"
            )
        minimum = min(minimum, float(min(tail[1], tail[2])))

    if minimum <= 0.0:
        raise ValueError(
            f"cosine integral attains a nonpositive minimum {minimum:.6g} on "
            f"[{x_min:g}, {x_max:g}]; no positive bound constant exists there"
        )
    return minimum


def positive_bound_inner_cutoff(alpha: float, margin: float = 1.25) -> float:
    """Inner cutoff beyond which the oscillation stays strictly positive.

    The integral oscillates about its limit A with half-period amplitude close
    to x^{-alpha}, so positivity holds once x^{-alpha} < A / margin.  The
    returned cutoff is also kept past the first few oscillations where the
    amplitude estimate is crude.
    """
    if margin <= 1.0:
        raise ValueError("margin must exceed 1")
    limit = cosine_power_limit(alpha)
    return max(4.0 * math.pi, (margin / limit) ** (1.0 / alpha))


# ---------------------------------------------------------------------------
# the singular symbol families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleSpec:
    """Parameters of one singular symbol family.

    ``alpha`` is the singularity strength, ``p`` the Lebesgue exponent whose
    conjugate drives the weight power, ``box_half_width`` the half-width L of
    the compact support box, and ``r_inner``/``t_outer`` the inner and outer
    cutoffs of the frequency region whose truncated integral is swept.
    """

    tag: GroupTag
    alpha: float
    p: float
    box_half_width: float = 1.0
    r_inner: float = 1.0
    t_outer: float = 1.0e7

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2), got {self.alpha}")
        if not self.p > 2.0:
            raise ValueError(f"p must exceed 2, got {self.p}")
        if not self.box_half_width > 0.0:
            raise ValueError("box_half_width must be positive")
        if not 0.0 < self.r_inner < self.t_outer:
            raise ValueError("cutoffs must satisfy 0 < r_inner < t_outer")

    @property
    def p_prime(self) -> float:
        """Conjugate exponent p/(p-1), in (1, 2)."""
        return self.p / (self.p - 1.0)

    @classmethod
    def with_conjugate(
        cls,
        tag: GroupTag,
        alpha: float,
        p_prime: float,
        **kwargs,
    ) -> "CounterexampleSpec":
        """Build a spec from the conjugate exponent p' in (1, 2)."""
        if not 1.0 < p_prime < 2.0:
            raise ValueError(f"p_prime must lie in (1, 2), got {p_prime}")
        return cls(tag=tag, alpha=alpha, p=p_prime / (p_prime - 1.0), **kwargs)


def build_singular_profile(spec: CounterexampleSpec, grid) -> np.ndarray:
    """Sample the singular symbol family on a group grid.

    Affine: |b|^{-alpha} a^2 on the box |b| <= L, 0 < a <= L.
    Similitude: |b1 b2|^{-alpha} a^3 theta on |b_i| <= L, 0 < a <= L.
    Affine Poincare: |b1 b2|^{-alpha} a^5 theta on |b_i| <= L, 0 < a <= L,
    |theta| <= L.

    Raises if any translation node sits on the singular set b_i = 0; group
    grids use even node counts precisely so that the axis is offset from 0.
    """
    tag = grid.meta.get("tag")
    if tag != spec.tag:
        raise ValueError(f"grid is for {tag}, spec is for {spec.tag}")
    L = spec.box_half_width
    nodes = grid.nodes
    if tag == GroupTag.AFFINE:
        b, a = nodes[:, 0], nodes[:, 1]
        if np.min(np.abs(b)) < 1e-12:
            raise ValueError("translation grid places a node on the singular set b = 0")
        values = np.abs(b) ** (-spec.alpha) * a**2
        support = (np.abs(b) <= L) & (a <= L)
        return np.where(support, values, 0.0)
    b1, b2, a, ang = nodes[:, 0], nodes[:, 1], nodes[:, 2], nodes[:, 3]
    if min(np.min(np.abs(b1)), np.min(np.abs(b2))) < 1e-12:
        raise ValueError("translation grid places a node on a singular hyperplane")
    radial = (np.abs(b1) * np.abs(b2)) ** (-spec.alpha)
    if tag == GroupTag.SIM2:
        values = radial * a**3 * ang
        support = (np.abs(b1) <= L) & (np.abs(b2) <= L) & (a <= L)
    else:
        values = radial * a**5 * ang
        support = (np.abs(b1) <= L) & (np.abs(b2) <= L) & (a <= L) & (np.abs(ang) <= L)
    return np.where(support, values, 0.0)


def affine_profile_partial_fourier(spec: CounterexampleSpec, s, a):
    """Closed form of the translation-Fourier transform of the affine profile.

    For the affine family the b-integral evaluates exactly:

        (2 pi)^{-1/2} * 2 * C(alpha, |s| L) * |s|^(alpha-1) * a^2

    for 0 < a <= L and 0 otherwise; even in s.  Used as the independent
    reference against the quadrature-based translation transform.
    """
    if spec.tag != GroupTag.AFFINE:
        raise ValueError("closed form is specific to the affine family")
    s_arr, a_arr = np.broadcast_arrays(np.asarray(s, float), np.asarray(a, float))
    if np.min(np.abs(s_arr)) <= 0.0:
        raise ValueError("the transform is singular at s = 0")
    mag = np.abs(s_arr)
    osc = cosine_power_integral(spec.alpha, mag * spec.box_half_width)
    values = (
        (2.0 * math.pi) ** -0.5
        * 2.0
        * np.asarray(osc)
        * mag ** (spec.alpha - 1.0)
        * a_arr**2
    )
    support = (a_arr > 0.0) & (a_arr <= spec.box_half_width)
    return np.where(support, values, 0.0).astype(np.complex128)


# ---------------------------------------------------------------------------
# truncated divergence integrals
# ---------------------------------------------------------------------------


def predicted_exponent(spec: CounterexampleSpec) -> float:
    """Tail power e of the dominant one-dimensional truncated integral.

    The truncated value grows like T^(e+1)/(e+1) for e > -1, like log T at
    e = -1, and is Cauchy in T for e < -1.
    """
    alpha, pp = spec.alpha, spec.p_prime
    if spec.tag == GroupTag.AFFINE:
        return 2.0 * (alpha - 1.0) + 2.0 / pp - 1.0
    if spec.tag == GroupTag.SIM2:
        return 2.0 * (alpha - 1.0) + 4.0 / pp - 2.0
    return 4.0 * (alpha - 1.0) + 2.0 / pp


def divergence_threshold(tag: GroupTag, p_prime: float) -> float:
    """The alpha above which the truncated integral diverges (e >= -1)."""
    if not 1.0 < p_prime < 2.0:
        raise ValueError(f"p_prime must lie in (1, 2), got {p_prime}")
    if tag == GroupTag.AFFINE:
        return 1.0 - 1.0 / p_prime
    if tag == GroupTag.SIM2:
        return 1.5 - 2.0 / p_prime
    return 0.75 - 0.5 / p_prime


def _power_integral(exponent: float, lo: float, hi: float) -> float:
    """integral of x^exponent over [lo, hi]; supports lo = 0 and hi = inf."""
    e1 = exponent + 1.0
    if math.isinf(hi):
        if e1 >= 0.0:
            raise ValueError(f"x^{exponent} is not integrable up to infinity")
        return -(lo**e1) / e1
    if abs(e1) < 1e-12:
        if lo <= 0.0:
            raise ValueError("logarithmic integral requires lo > 0")
        return math.log(hi / lo)
    if lo == 0.0 and e1 <= 0.0:
        raise ValueError(f"x^{exponent} is not integrable down to 0")
    return (hi**e1 - (lo**e1 if lo > 0.0 else 0.0)) / e1


def _poincare_outer_integral(
    spec: CounterexampleSpec, t_outer: float, points_per_decade: int
) -> float:
    """Quadrature of the region-restricted double frequency integral.

    On the region {R <= x2 <= x1 - 1, x1 <= T} of the forward cone the inner
    x2-integral is an exact power antiderivative, leaving the smooth outer
    integrand x1^{2(alpha-1)} ((x1-1)^q - R^q)/q with q = 2(alpha-1) + 2/p'.
    The outer quadrature is a trapezoid rule on a fixed-step log grid anchored
    at the lower end, so enlarging T only appends panels and the value is
    exactly nondecreasing in T.
    """
    alpha, pp, R = spec.alpha, spec.p_prime, spec.r_inner
    q = 2.0 * (alpha - 1.0) + 2.0 / pp
    lo = R + 1.0
    if t_outer <= lo:
        return 0.0
    step = math.log(10.0) / points_per_decade
    n_steps = int(math.floor(math.log(t_outer / lo) / step))
    x = lo * np.exp(step * np.arange(n_steps + 1))
    if x[-1] < t_outer * (1.0 - 1e-12):
        x = np.append(x, t_outer)
    if abs(q) < 1e-12:
        inner = np.log((x - 1.0) / R)
    else:
        inner = ((x - 1.0) ** q - R**q) / q
    integrand = x ** (2.0 * (alpha - 1.0)) * np.maximum(inner, 0.0)
    return float(np.trapezoid(integrand, x))


def truncated_divergence_integral(
    spec: CounterexampleSpec,
    t_outer: float | None = None,
    *,
    bound_constant: float | None = None,
    points_per_decade: int = 96,
) -> float:
    """Truncated lower bound of the squared weighted-kernel Hilbert-Schmidt norm.

    All compactly supported factors (the a- and angle-integrals of the squared
    profile) and the convergent frequency factor are evaluated in closed form;
    the divergent frequency direction is cut off at ``t_outer``.  The
    oscillatory factors are bounded below by ``bound_constant`` (computed on
    [r_inner * L, inf) when not supplied), so the result scales like
    T^(e+1)/(e+1) with e = :func:`predicted_exponent`.
    """
    T = float(spec.t_outer if t_outer is None else t_outer)
    if T <= spec.r_inner:
        raise ValueError("outer cutoff must exceed the inner cutoff")
    if bound_constant is None:
        bound_constant = oscillation_lower_bound(
            spec.alpha, spec.r_inner * spec.box_half_width, math.inf
        )
    if bound_constant <= 0.0:
        return 0.0
    alpha, pp, L, R = spec.alpha, spec.p_prime, spec.box_half_width, spec.r_inner

    if spec.tag == GroupTag.AFFINE:
        a_factor = _power_integral(1.0 + 2.0 / pp, 0.0, L)
        tail = _power_integral(predicted_exponent(spec), R, T)
        return (2.0 * bound_constant**2 / math.pi) * a_factor * tail

    if spec.tag == GroupTag.SIM2:
        # ||xi||^(4/p'-2) >= (2^{-1/2} |xi_1|)^(4/p'-2) splits the frequency
        # integral into a divergent xi_1 power and a convergent xi_2 power.
        prefactor = (
            16.0 * bound_constant**4 / (2.0 * math.pi) ** 2 * 2.0 ** (1.0 - 2.0 / pp)
        )
        angle_factor = _power_integral(2.0, 0.0, 2.0 * math.pi)
        a_factor = _power_integral(4.0 / pp + 1.0, 0.0, L)
        convergent = _power_integral(2.0 * (alpha - 1.0), R, math.inf)
        tail = _power_integral(predicted_exponent(spec), R, T)
        return prefactor * angle_factor * a_factor * convergent * tail

    prefactor = (
        16.0 * bound_constant**4 / (2.0 * math.pi) ** 2 * 2.0 ** (2.0 / pp - 1.0)
    )
    a_factor = _power_integral(2.0 / pp + 4.0, 0.0, L)
    angle_factor = 2.0 * L**3 / 3.0
    outer = _poincare_outer_integral(spec, T, points_per_decade)
    return prefactor * a_factor * angle_factor * outer


# ---------------------------------------------------------------------------
# sweeps and growth classification
# ---------------------------------------------------------------------------


@dataclass
class SweepRecord:
    """One point of a divergence sweep; ``fitted_slope`` is filled afterwards."""

    spec: CounterexampleSpec
    truncation: float
    value: float
    predicted_exponent: float
    fitted_slope: float | None = None


def run_divergence_sweep(
    spec: CounterexampleSpec,
    *,
    t_ratio: float = 10.0**0.25,
    points_per_decade: int = 96,
) -> list[SweepRecord]:
    """Sweep the truncated integral over geometrically spaced outer cutoffs.

    Cutoffs run from 10 * r_inner to t_outer at ratio ``t_ratio``.  The bound
    constant is computed once on [r_inner * L, inf) so that record values are
    exactly nondecreasing in T.  The fitted log-log slope over the largest
    decade is written into every record.
    """
    if t_ratio <= 1.0:
        raise ValueError("t_ratio must exceed 1")
    start = 10.0 * spec.r_inner
    if start >= spec.t_outer:
        raise ValueError("t_outer leaves no room for a sweep (needs > 10 * r_inner)")
    count = int(math.floor(math.log(spec.t_outer / start) / math.log(t_ratio))) + 1
    cutoffs = start * t_ratio ** np.arange(count)
    if cutoffs[-1] < spec.t_outer * (1.0 - 1e-9):
        cutoffs = np.append(cutoffs, spec.t_outer)
    constant = oscillation_lower_bound(
        spec.alpha, spec.r_inner * spec.box_half_width, math.inf
    )
    exponent = predicted_exponent(spec)
    records = [
        SweepRecord(
            spec=spec,
            truncation=float(T),
            value=truncated_divergence_integral(
                spec, float(T), bound_constant=constant,
                points_per_decade=points_per_decade,
            ),
            predicted_exponent=exponent,
        )
        for T in cutoffs
    ]
    slope = fit_loglog_slope(records)
    for record in records:
        record.fitted_slope = slope
    return records


def fit_loglog_slope(records: list[SweepRecord]) -> float:
    """Least-squares slope of log(value) vs log(T) over the largest decade."""
    if len(records) < 4:
        raise ValueError("need at least 4 sweep records to fit a slope")
    T = np.array([r.truncation for r in records], dtype=float)
    V = np.array([r.value for r in records], dtype=float)
    order = np.argsort(T)
    T, V = T[order], V[order]
    if np.any(V <= 0.0):
        raise ValueError("sweep values must be positive to fit a log-log slope")
    window = T >= T[-1] / 10.0 * (1.0 - 1e-12)
    if window.sum() < 3:
        raise ValueError("largest decade holds fewer than 3 records")
    slope, _ = np.polyfit(np.log(T[window]), np.log(V[window]), 1)
    return float(slope)


def classify_growth(records: list[SweepRecord]) -> str:
    """Label a sweep as ``divergent``, ``convergent``, ``logarithmic``, or
    ``indeterminate``.

    Power growth shows as a log-log slope >= 0.04 over the largest decade.
    Cauchy convergence shows as per-decade increments contracting by a clear
    factor.  Logarithmic growth has a small power slope with constant
    per-decade increments, so the affine-in-log-T model must fit better than
    the power model.
    """
    slope = fit_loglog_slope(records)
    if slope >= 0.04:
        return "divergent"

    T = np.array([r.truncation for r in records], dtype=float)
    V = np.array([r.value for r in records], dtype=float)
    order = np.argsort(T)
    T, V = T[order], V[order]
    t_max = T[-1]
    if T[0] > t_max / 100.0:
        raise ValueError("sweep must span at least two decades to classify growth")
    i_mid = int(np.argmin(np.abs(T - t_max / 10.0)))
    i_start = int(np.argmin(np.abs(T - t_max / 100.0)))
    inc_prev = V[i_mid] - V[i_start]
    inc_last = V[-1] - V[i_mid]
    if inc_prev > 0.0 and inc_last / inc_prev < 0.85:
        return "convergent"

    window = T >= t_max / 10.0 * (1.0 - 1e-12)
    log_t, vals = np.log(T[window]), V[window]
    power_fit = np.polyfit(log_t, np.log(vals), 1)
    power_resid = np.exp(np.polyval(power_fit, log_t)) / vals - 1.0
    log_fit = np.polyfit(log_t, vals, 1)
    log_resid = np.polyval(log_fit, log_t) / vals - 1.0
    rms_power = float(np.sqrt(np.mean(power_resid**2)))
    rms_log = float(np.sqrt(np.mean(log_resid**2)))
    if slope < 0.02 and rms_log < rms_power:
        return "logarithmic"
    return "indeterminate"


def write_sweep_csv(records: list[SweepRecord], path) -> None:
    """Write sweep records as CSV plus a trailing summary comment line."""
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["group", "alpha", "p_prime", "L", "R", "T", "value", "predicted_exponent"]
        )
        for r in sorted(records, key=lambda rec: rec.truncation):
            writer.writerow(
                [
                    r.spec.tag.value,
                    f"{r.spec.alpha:.12g}",
                    f"{r.spec.p_prime:.12g}",
                    f"{r.spec.box_half_width:.12g}",
                    f"{r.spec.r_inner:.12g}",
                    f"{r.truncation:.12g}",
                    f"{r.value:.12g}",
                    f"{r.predicted_exponent:.12g}",
                ]
            )
        slope = records[0].fitted_slope
        slope_text = "nan" if slope is None else f"{slope:.12g}"
        handle.write(
            f"# fitted_slope={slope_text} classification={classify_growth(records)}\n"
        )


# ---------------------------------------------------------------------------
# affine Hilbert-Schmidt identity cross-check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSchmidtReport:
    """Two pipeline values of the affine squared S2 identity and their gap."""

    operator_side: float
    quadrature_side: float
    rel_gap: float


def hilbert_schmidt_crosscheck(
    profile,
    p_prime: float,
    *,
    n_trans: int | None = None,
    n_dil: int | None = None,
    n_freq: int | None = None,
    order: int = 3,
) -> HilbertSchmidtReport:
    """Check the affine identity between operator norms and a plain quadrature.

    The squared Hilbert-Schmidt norms of the two weighted transform kernels
    equal the double integral of |F1 f(s, a)|^2 a^(2/p'-3) |s|^(2/p'-1) over
    the represented band.  The left side runs through kernel assembly, row and
    column weighting, and singular values; the right side is a direct
    two-dimensional quadrature.  Only pairs whose dilated frequency a|s| stays
    on the truncated frequency window enter either side, since the discrete
    kernel contains exactly those.

    ``profile`` is either a :class:`CounterexampleSpec` for the singular
    affine family (the quadrature side then uses the closed-form transform) or
    a callable ``(b, a) -> values`` for a smooth symbol.
    """
    if not 1.0 < p_prime < 2.0:
        raise ValueError(f"p_prime must lie in (1, 2), got {p_prime}")
    exponent = 1.0 / p_prime

    if isinstance(profile, CounterexampleSpec):
        if profile.tag != GroupTag.AFFINE:
            raise ValueError("the identity check runs on the affine group")
        L = profile.box_half_width
        nt = 2048 if n_trans is None else n_trans
        nd = 48 if n_dil is None else n_dil
        nf = 128 if n_freq is None else n_freq
        # End the dilation window exactly at the support edge a = L, so the
        # hard cutoff of the profile is a grid boundary, not a jump inside a
        # cell that trapezoid weights and kernel interpolation disagree on.
        group_grid = build_group_grid(
            GroupTag.AFFINE,
            n_trans=nt,
            n_dil=nd,
            trans_max=L,
            dil_log_max=2.4,
            dil_log_center=math.log(L) - 2.4,
        )
        f_values = build_singular_profile(profile, group_grid)
        s_lo, s_hi = 0.3 / L, 40.0 / L
    else:
        nt = 128 if n_trans is None else n_trans
        nd = 48 if n_dil is None else n_dil
        nf = 128 if n_freq is None else n_freq
        group_grid = build_group_grid(
            GroupTag.AFFINE,
            n_trans=nt,
            n_dil=nd,
            trans_max=8.0,
            dil_log_max=1.8,
        )
        nodes = group_grid.nodes
        f_values = np.asarray(profile(nodes[:, 0], nodes[:, 1]), dtype=np.complex128)
        s_lo, s_hi = 0.5, 12.0

    dil_axis = group_grid.axis("dilation")
    a_nodes, a_weights = dil_axis.nodes, dil_axis.weights

    operator_side = 0.0
    quadrature_side = 0.0
    for label in labels_for(GroupTag.AFFINE):
        rep_grid = build_halfline_grid(
            1 if label.space == "plus" else -1, nf, s_lo, s_hi
        )
        kernel = group_fourier(
            label, group_grid, f_values, exponent, rep_grid, order=order
        )
        weighted = weighted_matrix(kernel.entries, rep_grid.weights, rep_grid.weights)
        operator_side += schatten_norm(weighted, 2.0) ** 2

        signed_s = rep_grid.nodes
        if isinstance(profile, CounterexampleSpec):
            f1 = affine_profile_partial_fourier(
                profile, signed_s[:, None], a_nodes[None, :]
            )
        else:
            f1 = partial_fourier_translation(group_grid, f_values, signed_s)
        band = np.abs(signed_s[:, None]) * a_nodes[None, :]
        inside = (band >= s_lo) & (band <= s_hi)
        integrand = (
            np.abs(f1) ** 2
            * a_nodes[None, :] ** (2.0 / p_prime - 3.0)
            * np.abs(signed_s[:, None]) ** (2.0 / p_prime - 1.0)
        )
        quadrature_side += float(
            np.sum(rep_grid.weights[:, None] * a_weights[None, :] * integrand * inside)
        )

    gap = abs(operator_side - quadrature_side) / max(quadrature_side, 1e-300)
    return HilbertSchmidtReport(
        operator_side=float(operator_side),
        quadrature_side=float(quadrature_side),
        rel_gap=float(gap),
    )
