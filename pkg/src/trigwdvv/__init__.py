"""Trigonometric BC_n prepotentials and numerical verification of their WDVV structure."""

__version__ = "0.1.0"

from .configurations import (
    BCnParameters,
    Configuration,
    Partition,
    WeightedVector,
    build_bcn,
    build_bcN_root_system,
    configurations_match,
    constraint_residual,
    project_vector,
    restrict_configuration,
    solve_r,
)
from .prepotential import (
    DEFAULT_THRESHOLD,
    eval_f,
    h_function,
    hyperbolic_helpers,
    identity_residuals,
    is_admissible,
    metric_B,
    tensor_closed_form,
    tensor_generic,
)
from .wdvv import (
    CONDITION_CAP,
    WdvvResidualRecord,
    commuting_residual,
    diagonality_report,
    generalized_wdvv_residual,
    wdvv_residual,
)
from .algebra import (
    ProductContext,
    RestrictionContext,
    associativity_residual,
    h_b_decomposition_residual,
    multiply,
    restricted_multiply,
    structure_constants,
    tangency_residual,
)
from .susy import (
    FermionicSpace,
    RescaledConfiguration,
    bosonic_potential,
    build_fermionic_space,
    build_hat_configuration,
    gauge_residual,
    hat_metric,
    hat_tensor,
    hat_tensor_from_base,
    phi_matrix,
)

__all__ = [
    "BCnParameters",
    "Configuration",
    "Partition",
    "WeightedVector",
    "build_bcn",
    "build_bcN_root_system",
    "configurations_match",
    "constraint_residual",
    "project_vector",
    "restrict_configuration",
    "solve_r",
    "DEFAULT_THRESHOLD",
    "eval_f",
    "h_function",
    "hyperbolic_helpers",
    "identity_residuals",
    "is_admissible",
    "metric_B",
    "tensor_closed_form",
    "tensor_generic",
    "CONDITION_CAP",
    "WdvvResidualRecord",
    "commuting_residual",
    "diagonality_report",
    "generalized_wdvv_residual",
    "wdvv_residual",
    "ProductContext",
    "RestrictionContext",
    "associativity_residual",
    "h_b_decomposition_residual",
    "multiply",
    "restricted_multiply",
    "structure_constants",
    "tangency_residual",
    "FermionicSpace",
    "RescaledConfiguration",
    "bosonic_potential",
    "build_fermionic_space",
    "build_hat_configuration",
    "gauge_residual",
    "hat_metric",
    "hat_tensor",
    "hat_tensor_from_base",
    "phi_matrix",
    "__version__",
]
