"""Dynamics module: finite permutation systems, exact reversibility checks."""

from .system import (
    DetailedBalanceIdentity,
    FiniteDynamicalSystem,
    Macrostate,
    MechanicalReversibility,
    PermutationMap,
    check_detailed_balance_identity,
    check_mechanical_reversibility,
    free_motion,
    iterate,
    macro_transition_probability,
    permutation_system,
    random_macrostate,
    random_permutation_system,
)

__all__ = [
    "DetailedBalanceIdentity",
    "FiniteDynamicalSystem",
    "Macrostate",
    "MechanicalReversibility",
    "PermutationMap",
    "check_detailed_balance_identity",
    "check_mechanical_reversibility",
    "free_motion",
    "iterate",
    "macro_transition_probability",
    "permutation_system",
    "random_macrostate",
    "random_permutation_system",
]
