"""Exact spin-coefficient engine for neutral-signature Walker metrics."""

from .congruence import (
    CoefficientTrace,
    ConnectingState,
    connecting_oracle,
    curvature_free_solution,
    integrate_connecting,
    integrate_jacobi,
    riccati_residual,
    shape_decompositions,
    sigma_omega_forms,
    special_flows,
    write_trace_csv,
)
from .curvature import (
    CurvatureSpinors,
    bianchi_contracted_residual,
    classify_sd_weyl,
    commutator_residuals,
    field_equation_residuals,
    phi_lambda_from_ricci,
    prime_curvature,
    ricci_tensor,
    riemann,
    scalar_curvature,
    tilde_curvature,
    walker_curvature_components,
)
from .errors import (
    CausticError,
    DegenerateTetradError,
    EngineError,
    InputError,
    InternalInconsistencyError,
    PatternError,
)
from .heavenly import (
    HeavenlyPotential,
    build_metric,
    einstein_check,
    invariants,
    master_identity_residual,
    psi_components,
    scalar_flat_case,
    validate_potential,
    wave_operator,
)
from .nullgeom import (
    classify_type_I,
    classify_type_III,
    distribution_report,
    frobenius_residual,
    integrability_residual,
    kerr_check,
    multiple_spinor_differential_test,
    primed_spinor,
    recurrence_forms,
    relation_suite,
    ricci_conditions,
    weyl_quartic,
)
from .poly import (
    ExprSyntaxError,
    Poly,
    RationalFunction,
    parse_poly,
    poly_arith,
    poly_diff,
    poly_eval,
)
from .spincoeff import (
    COEFF_NAMES,
    Frame,
    SpinCoefficientSet,
    first_form_residuals,
    prime,
    spin_coefficients_from_tetrad,
    tilde_relabel,
    transform_coefficients,
    walker_closed_form,
)
from .walker import (
    WalkerMetric,
    assemble_metric,
    christoffel,
    ivdw_symbols,
    tetrad_covectors,
    validate_tetrad,
    walker_tetrad,
)

__all__ = [
    "CausticError",
    "COEFF_NAMES",
    "CoefficientTrace",
    "ConnectingState",
    "CurvatureSpinors",
    "DegenerateTetradError",
    "EngineError",
    "ExprSyntaxError",
    "Frame",
    "HeavenlyPotential",
    "InputError",
    "InternalInconsistencyError",
    "PatternError",
    "Poly",
    "RationalFunction",
    "SpinCoefficientSet",
    "WalkerMetric",
    "assemble_metric",
    "bianchi_contracted_residual",
    "build_metric",
    "christoffel",
    "classify_sd_weyl",
    "classify_type_I",
    "classify_type_III",
    "commutator_residuals",
    "connecting_oracle",
    "curvature_free_solution",
    "distribution_report",
    "einstein_check",
    "field_equation_residuals",
    "first_form_residuals",
    "frobenius_residual",
    "integrability_residual",
    "integrate_connecting",
    "integrate_jacobi",
    "invariants",
    "ivdw_symbols",
    "kerr_check",
    "master_identity_residual",
    "multiple_spinor_differential_test",
    "parse_poly",
    "phi_lambda_from_ricci",
    "poly_arith",
    "poly_diff",
    "poly_eval",
    "prime",
    "prime_curvature",
    "primed_spinor",
    "psi_components",
    "recurrence_forms",
    "relation_suite",
    "ricci_conditions",
    "ricci_tensor",
    "riccati_residual",
    "riemann",
    "scalar_curvature",
    "scalar_flat_case",
    "shape_decompositions",
    "sigma_omega_forms",
    "special_flows",
    "spin_coefficients_from_tetrad",
    "tetrad_covectors",
    "tilde_curvature",
    "tilde_relabel",
    "transform_coefficients",
    "validate_potential",
    "validate_tetrad",
    "walker_closed_form",
    "walker_curvature_components",
    "walker_tetrad",
    "wave_operator",
    "weyl_quartic",
]
