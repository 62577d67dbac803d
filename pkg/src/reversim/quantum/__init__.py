"""Quantum module: repeated projective measurements and their time-reversal.

Value types:
- StateVector, DensityMatrix, HermitianOperator, UnitaryOperator
- AntiunitaryInvolution: pi(psi) = V conj(psi)
- ObservableDecomposition / Condition / ConditionReversalMap
- MeasurementSchedule, Trajectory, TrajectoryDistribution

Operations:
- hilbert: eigendecompose, evolve, apply_involution, conjugate_operator,
  check_reversal_symmetry
- observables: decompose_observable, build_magnetization, build_site_operator,
  reverse_conditions
- engine: trajectory_probability, enumerate_distribution, reverse_trajectory,
  verify_time_reversal, detailed_balance_ratio, abl_conditional, marginals,
  measurement_chain
- sampler: sample_trajectory, sample_trajectories, total_variation
- entropy: entropy_of_condition, entropy_trace, entropy_flow_demo
- retrodiction: two_spin_retrodiction, single_spin_retrodiction
"""

from .hilbert import (
    AntiunitaryInvolution,
    DensityMatrix,
    EigenCluster,
    HermitianOperator,
    ReversalSymmetry,
    StateVector,
    UnitaryOperator,
    apply_involution,
    check_reversal_symmetry,
    conjugate_operator,
    eigendecompose,
    evolve,
    random_hermitian,
)
from .observables import (
    Condition,
    ConditionReversalMap,
    ObservableDecomposition,
    build_magnetization,
    build_site_operator,
    decompose_observable,
    operator_difference,
    operator_scale,
    operator_sum,
    reverse_conditions,
    spin_involution,
)
from .schedule import MeasurementSchedule, Trajectory, TrajectoryDistribution
from .engine import (
    DetailedBalanceRatio,
    TimeReversalReport,
    abl_conditional,
    abl_distribution,
    detailed_balance_ratio,
    detailed_balance_table,
    enumerate_distribution,
    marginals,
    measurement_chain,
    reverse_trajectory,
    trajectory_probability,
    verify_abl_symmetry,
    verify_time_reversal,
)
from .sampler import sample_trajectories, sample_trajectory, total_variation
from .entropy import EntropyFlowSummary, entropy_flow_demo, entropy_of_condition, entropy_trace
from .models import random_real_schedule, spin_bernoulli_schedule, spin_flip_hamiltonian
from .retrodiction import RetrodictionResult, single_spin_retrodiction, two_spin_retrodiction

__all__ = [
    # Value types
    "AntiunitaryInvolution",
    "DensityMatrix",
    "EigenCluster",
    "HermitianOperator",
    "ReversalSymmetry",
    "StateVector",
    "UnitaryOperator",
    "Condition",
    "ConditionReversalMap",
    "ObservableDecomposition",
    "MeasurementSchedule",
    "Trajectory",
    "TrajectoryDistribution",
    # Results
    "DetailedBalanceRatio",
    "EntropyFlowSummary",
    "RetrodictionResult",
    "TimeReversalReport",
    # Hilbert operations
    "apply_involution",
    "check_reversal_symmetry",
    "conjugate_operator",
    "eigendecompose",
    "evolve",
    "random_hermitian",
    # Observables
    "build_magnetization",
    "build_site_operator",
    "decompose_observable",
    "operator_difference",
    "operator_scale",
    "operator_sum",
    "reverse_conditions",
    "spin_involution",
    # Engine
    "abl_conditional",
    "abl_distribution",
    "detailed_balance_ratio",
    "detailed_balance_table",
    "enumerate_distribution",
    "marginals",
    "measurement_chain",
    "reverse_trajectory",
    "trajectory_probability",
    "verify_abl_symmetry",
    "verify_time_reversal",
    # Sampling and entropy
    "sample_trajectories",
    "sample_trajectory",
    "total_variation",
    "entropy_flow_demo",
    "entropy_of_condition",
    "entropy_trace",
    # Worked examples
    "random_real_schedule",
    "spin_bernoulli_schedule",
    "spin_flip_hamiltonian",
    "single_spin_retrodiction",
    "two_spin_retrodiction",
]
