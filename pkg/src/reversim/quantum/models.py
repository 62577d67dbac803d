"""Standard models: the driven single spin and seeded random spin systems."""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from .hilbert import HermitianOperator, StateVector, random_hermitian
from .observables import SIGMA_X, SIGMA_Z, build_magnetization, decompose_observable
from .schedule import MeasurementSchedule


def spin_flip_hamiltonian(omega: float = 1.0) -> HermitianOperator:
    """H = omega (1 - sigma_x) / 2; takes |up> to |down> in time pi / omega."""
    return HermitianOperator(omega * (np.eye(2) - SIGMA_X) / 2)


def spin_bernoulli_schedule(
    steps: int,
    omega: float = 1.0,
    start: Literal["mixed", "up", "down"] = "mixed",
) -> MeasurementSchedule:
    """sigma^z measured at T/4, 2T/4, ..., steps T/4 with T = 2 pi / omega.

    The state is prepared at t = 0, either as 1/2 or as a basis state.
    Every outcome sequence then has probability 2^-steps.
    """
    period = 2 * math.pi / omega
    obs = decompose_observable(HermitianOperator(SIGMA_Z))
    initial = None
    if start == "up":
        initial = StateVector.basis(2, 0)
    elif start == "down":
        initial = StateVector.basis(2, 1)
    times = [k * period / 4 for k in range(1, steps + 1)]
    return MeasurementSchedule(
        times, [obs] * steps, spin_flip_hamiltonian(omega), initial, preparation_time=0.0
    )


def random_real_schedule(
    n_sites: int, steps: int, seed: int, dt: float = 1.0, scale: float = 1.0
) -> MeasurementSchedule:
    """m_z at equally spaced times under a seeded real symmetric Hamiltonian, rho_0 = 1/d."""
    obs = decompose_observable(build_magnetization(n_sites))
    h = random_hermitian(obs.dim, np.random.default_rng(seed), real=True, scale=scale)
    return MeasurementSchedule.uniform(h, obs, steps, dt=dt)
