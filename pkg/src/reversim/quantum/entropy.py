"""Entropy: quantum Boltzmann entropy S(alpha) = log d_alpha and its flow.

The demo starts N spins in the fully polarized condition m = +1
(d_alpha = 1, S = 0), evolves under random real symmetric Hamiltonians
(which commute with complex conjugation) and records how the entropy of
the measured condition changes. The increase is typical, not certain.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..protocols import Observable
from .hilbert import StateVector, random_hermitian
from .observables import build_magnetization, decompose_observable
from .sampler import sample_trajectory
from .schedule import MeasurementSchedule, Trajectory

logger = logging.getLogger(__name__)


def entropy_of_condition(obs: Observable, label: str) -> float:
    """Natural log of the condition's dimension."""
    return math.log(obs.dimension_of(label))


def entropy_trace(omega: Trajectory, s: MeasurementSchedule) -> list[float]:
    """S(alpha_k) for every step of omega."""
    s.check_trajectory(omega)
    return [entropy_of_condition(obs, label) for obs, label in zip(s.observables, omega)]


@dataclass(frozen=True)
class EntropyFlowSummary:
    """Per-step statistics of S(alpha_k) - S(alpha_0) over seeds.

    Attributes:
        increments: Array of shape (runs, steps + 1)
        median, q1, q3, mean: Per-step statistics, step 0 first
    """

    n_sites: int
    increments: np.ndarray
    median: tuple[float, ...]
    q1: tuple[float, ...]
    q3: tuple[float, ...]
    mean: tuple[float, ...]

    @property
    def steps(self) -> int:
        return self.increments.shape[1] - 1


def entropy_flow_demo(
    n_sites: int,
    seeds: int,
    steps: int,
    base_seed: int = 0,
    samples_per_seed: int = 1,
    dt: float = 1.0,
    scale: float = 1.0,
) -> EntropyFlowSummary:
    """Entropy increments from the extreme magnetization condition.

    For each seed a real symmetric Hamiltonian is drawn; samples_per_seed
    trajectories are then sampled with m_z measured at 0, dt, ..., steps * dt.
    Seed k uses the k-th child of SeedSequence(base_seed).
    """
    obs = decompose_observable(build_magnetization(n_sites))
    dim = obs.dim
    start = StateVector.basis(dim, 0)
    children = np.random.SeedSequence(base_seed).spawn(seeds)

    rows = []
    for child in children:
        rng = np.random.default_rng(child)
        h = random_hermitian(dim, rng, real=True, scale=scale)
        sched = MeasurementSchedule.uniform(h, obs, steps + 1, dt=dt, initial_state=start)
        for _ in range(samples_per_seed):
            trace = entropy_trace(sample_trajectory(sched, rng), sched)
            rows.append([s - trace[0] for s in trace])

    inc = np.array(rows)
    q1, med, q3 = np.percentile(inc, [25, 50, 75], axis=0)
    logger.debug("entropy_flow_demo: N=%d runs=%d median=%s", n_sites, len(rows), med)
    return EntropyFlowSummary(
        n_sites=n_sites,
        increments=inc,
        median=tuple(float(x) for x in med),
        q1=tuple(float(x) for x in q1),
        q3=tuple(float(x) for x in q3),
        mean=tuple(float(x) for x in inc.mean(axis=0)),
    )
