"""Retrodiction: the single-spin and two-spin examples, run through the engine.

Both examples use trivial dynamics (H = 0). In the two-spin example the
forward probability of finding sigma^z_1 - sigma^z_2 = 2 after
sigma^z_1 + sigma^z_2 = 0 depends on the preparation, while the
reversed question (start from |up down>, ask for zero magnetization)
has probability one. For equal coefficients the ratio is 1/2, the
ratio of the two eigenspace dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ..errors import PreconditionViolated
from .engine import ZERO_PROBABILITY, abl_conditional, marginals, trajectory_probability
from .hilbert import HermitianOperator, StateVector
from .observables import (
    PAULI,
    build_site_operator,
    condition_label,
    decompose_observable,
    operator_difference,
    operator_sum,
)
from .schedule import MeasurementSchedule, Trajectory

UP_DOWN = 1  # index of |up down> in the basis (uu, ud, du, dd)


@dataclass(frozen=True)
class RetrodictionResult:
    """Forward and reversed probabilities of the two-spin example.

    Attributes:
        forward: Prob[diff = 2 at t_2 | sum = 0 at t_1], started from psi_0
        reversed: Prob[sum = 0] when started from |up down>
        dimension_ratio: d(diff = 2) / d(sum = 0)
    """

    forward: float
    reversed: float
    dimension_ratio: float

    @property
    def ratio(self) -> float:
        return self.forward / self.reversed


def two_spin_observables() -> tuple[HermitianOperator, HermitianOperator]:
    """(sigma^z_1 + sigma^z_2, sigma^z_1 - sigma^z_2) on two spins."""
    z1 = build_site_operator(2, 1, "z")
    z2 = build_site_operator(2, 2, "z")
    return operator_sum(z1, z2), operator_difference(z1, z2)


def two_spin_retrodiction(coefficients: Sequence[complex]) -> RetrodictionResult:
    """Run the two-spin example for psi_0 = c_uu|uu> + c_ud|ud> + c_du|du> + c_dd|dd>.

    Raises:
        PreconditionViolated: |c_ud|^2 + |c_du|^2 = 0, so sum = 0 never occurs
    """
    psi0 = StateVector(np.asarray(coefficients, dtype=complex))
    total, diff = two_spin_observables()
    sum_obs, diff_obs = decompose_observable(total), decompose_observable(diff)
    zero, two = condition_label(0.0), condition_label(2.0)
    zero_h = HermitianOperator.zero(4)

    forward_sched = MeasurementSchedule(
        [1.0, 2.0], [sum_obs, diff_obs], zero_h, psi0, preparation_time=0.0
    )
    p_condition = marginals(forward_sched)[0][zero]
    if p_condition <= ZERO_PROBABILITY:
        raise PreconditionViolated("conditioning event has probability zero", "sum = 0")
    forward = trajectory_probability(forward_sched, Trajectory((zero, two))) / p_condition

    reversed_sched = MeasurementSchedule(
        [1.0], [sum_obs], zero_h, StateVector.basis(4, UP_DOWN), preparation_time=0.0
    )
    backward = trajectory_probability(reversed_sched, Trajectory((zero,)))

    return RetrodictionResult(
        forward=forward,
        reversed=backward,
        dimension_ratio=diff_obs.dimension_of(two) / sum_obs.dimension_of(zero),
    )


def single_spin_retrodiction(axis: Literal["x", "z"] = "z") -> float:
    """Probability that an intermediate measurement along axis finds up.

    The spin is prepared up along x (recorded as a first sigma^x outcome),
    H = 0, and sigma^z is found up at the final time. Both axes give 1.
    """
    x_obs = decompose_observable(HermitianOperator(PAULI["x"]))
    z_obs = decompose_observable(HermitianOperator(PAULI["z"]))
    mid_obs = x_obs if axis == "x" else z_obs
    up = condition_label(1.0)
    sched = MeasurementSchedule(
        [0.0, 1.0, 2.0],
        [x_obs, mid_obs, z_obs],
        HermitianOperator.zero(2),
        StateVector([1.0, 1.0]),
    )
    return abl_conditional(sched, up, up, [up])
