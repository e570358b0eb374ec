"""Operator-valued harmonic analysis on nonunimodular dilation groups.

The package builds the affine group of the line, the similitude group of
the plane and the affine Poincare group as quadrature objects, applies
their irreducible representations on lattice grids, evaluates operator
Fourier / Wigner / Weyl transforms with Plancherel-exact normalization,
and measures the Schatten-norm growth that separates bounded from
unbounded quantization on such groups.
"""
from __future__ import annotations

from .groups import (
    GroupTag,
    HaarSide,
    GroupElement,
    element,
    identity,
    multiply,
    inverse,
    haar_density,
    modular_function,
    plane_action,
)
from .grids import (
    Axis,
    Grid,
    GridFunction,
    build_halfline_grid,
    build_plane_grid,
    build_cone_grid,
    build_group_grid,
    integrate,
    lattice_interpolate,
)
from .representations import (
    RepLabel,
    DufloMooreSpec,
    labels_for,
    rep_grid_matches,
    duflo_moore_weight,
    apply_duflo_moore,
    apply_representation,
    accumulate_representation,
    representation_matrix,
)
from .schatten import (
    SingularSpectrum,
    weighted_matrix,
    singular_values,
    schatten_norm,
    mixed_norm,
)
from .transforms import (
    KernelMatrix,
    OperatorField,
    WignerField,
    SymbolField,
    partial_fourier_translation,
    group_fourier,
    dense_group_fourier,
    group_translation_table,
    wigner_transform,
    fourier_via_wigner,
    weyl_quadratic_form,
    inversion_reconstruct,
)
from .counterexamples import (
    CounterexampleSpec,
    SweepRecord,
    HilbertSchmidtReport,
    cosine_power_integral,
    cosine_power_integral_tail,
    cosine_power_limit,
    oscillation_lower_bound,
    positive_bound_inner_cutoff,
    build_singular_profile,
    predicted_exponent,
    divergence_threshold,
    truncated_divergence_integral,
    run_divergence_sweep,
    fit_loglog_slope,
    classify_growth,
    write_sweep_csv,
    hilbert_schmidt_crosscheck,
)

__version__ = "0.1.0"
