"""Exact rationalizability tests for random utility models of stochastic choice."""

from rumcheck.axiom import (
    Assignment,
    Capacity,
    certificate_to_pair,
    is_feasible_pair,
    is_locally_feasible_pair,
    verify_rumme,
)
from rumcheck.core import (
    AlternativeSet,
    PreferenceDistribution,
    RandomChoiceRule,
    enumerate_orders,
    induce_rcr,
    validate_rcr,
)
from rumcheck.errors import MethodDisagreement, RumError
from rumcheck.hrep import (
    build_p_system,
    build_q_system,
    hrep_feasible,
    matrix_stats,
    predicted_row_count,
    pslack_feasible,
)
from rumcheck.lp import (
    FarkasCertificate,
    FeasibilityResult,
    LinearSystem,
    solve_feasibility,
    verify_certificate,
)
from rumcheck.mobius import LatticeFunction, accumulate, mobius_inverse, satisfies_qtop
from rumcheck.monotone import PartialOrder, monotone_feasible, monotone_orders
from rumcheck.patches import Budget, build_patches_2goods
from rumcheck.vrep import arsp_search, column_generation, linf_statistic, vrep_feasible

__version__ = "0.1.0"

__all__ = [
    "AlternativeSet",
    "Assignment",
    "Budget",
    "Capacity",
    "FarkasCertificate",
    "FeasibilityResult",
    "LatticeFunction",
    "LinearSystem",
    "MethodDisagreement",
    "PartialOrder",
    "PreferenceDistribution",
    "RandomChoiceRule",
    "RumError",
    "accumulate",
    "arsp_search",
    "build_p_system",
    "build_patches_2goods",
    "build_q_system",
    "certificate_to_pair",
    "column_generation",
    "enumerate_orders",
    "hrep_feasible",
    "induce_rcr",
    "is_feasible_pair",
    "is_locally_feasible_pair",
    "linf_statistic",
    "matrix_stats",
    "mobius_inverse",
    "monotone_feasible",
    "monotone_orders",
    "predicted_row_count",
    "pslack_feasible",
    "satisfies_qtop",
    "solve_feasibility",
    "validate_rcr",
    "verify_rumme",
    "verify_certificate",
    "vrep_feasible",
]
