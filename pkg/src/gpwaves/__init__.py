"""Quasi-Trefftz generalized plane waves for variable-coefficient PDEs.

Amplitude-based waves Q(x,y) exp(d.r) and phase-based waves exp(P(x,y)) are
built layer by layer so that the governing operator applied to them has a
vanishing Taylor expansion at a chosen center, then used as local
interpolation bases for smooth PDE solutions.
"""

from .cases import TestCase, builtin_test_cases, case_labels, get_case
from .construct import (
    AmplitudeGPW,
    Certificate,
    CostCounter,
    Direction,
    PhaseGPW,
    construct_amplitude_gpw,
    construct_phase_gpw,
    evaluate,
    evaluate_gradient,
    gpw_family,
    harmonic_layer_basis,
    normalize_direction,
    principal_homogeneous_map,
    residual_certificate,
    residual_polynomial,
)
from .errors import GPWError
from .experiments import (
    ConvergenceReport,
    Field,
    SweepConfig,
    circle_error,
    combination_field,
    comparison_h_grid,
    default_h_grid,
    exact_field,
    fit_order,
    run_convergence,
    sample_centers,
    write_report,
)
from .interpolation import (
    MatchResult,
    TaylorMatrix,
    build_matrix,
    classical_pw_column,
    condition_number,
    gpw_taylor_column,
    match_solution,
    numerical_rank,
    unitriangular_relation_check,
)
from .operators import (
    CoefficientField,
    OperatorSpec,
    apply_operator_taylor,
    conjugated_amplitude_operator,
    conjugated_fields,
    conjugated_phase_operator,
)
from .series import (
    MultiIndex2,
    TaylorPoly2,
    UniSeries,
    differentiate,
    elementary_series,
    exp_jet,
    exp_of_poly,
    homogeneous_part,
    scaled_exp_series,
    tri_index,
    tri_len,
    truncated_multiply,
    univariate_along_line,
    univariate_to_bivariate,
)
from .specialfn import (
    airy_ai,
    airy_ai_prime,
    airy_taylor,
    bessel_j0,
    bessel_j1,
    bessel_j1_prime,
    bessel_taylor,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
