"""Exact equivariant localization checks for circle actions with two fixed components."""

__version__ = "0.1.0"

from .ring import (
    LaurentClass,
    Rational,
    TruncPoly,
    coefficient,
    divide_exact,
    generators,
    laurent_invert_euler,
    poly_invert_unit,
    poly_mul_trunc,
    try_divide,
)
from .localization import (
    EquivariantInput,
    FixedComponent,
    HamiltonianModel,
    LocalizationValue,
    ModelError,
    abbv_integrate,
    basis_beta_input,
    component_from_dict,
    component_to_dict,
    grassmannian_model,
    integrate_component,
    model_from_dict,
    model_to_dict,
    monomial_input,
    restrict_u_tilde,
    validate_model,
)
from .theorems import (
    ABPair,
    DivisibilitySolution,
    NonSemifreeFactorSolution,
    PreconditionError,
    RingPresentation,
    ab_closed_forms,
    betti_numbers,
    c1_from_fixed_data,
    chern_consistency,
    chern_of_normal_bundle,
    chern_to_equivariant,
    coefficients_AB,
    derive_euler_classes,
    derive_total_chern_X,
    euler_divisibility_solutions,
    hypothetical_non_semifree_model,
    module_basis_check,
    non_semifree_factor_search,
    non_semifree_obstruction,
    ring_presentation,
    semifree_c1_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
