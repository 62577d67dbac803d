"""Sampler: Monte Carlo trajectories through collapse.

At each scheduled time an outcome alpha is drawn with probability
Tr[P_alpha rho], the state collapses to P_alpha rho P_alpha / Tr[P_alpha rho]
and then evolves to the next time.

Seeding rule for batches: the master seed feeds
numpy.random.SeedSequence(seed).spawn(workers); worker k draws the k-th
contiguous share of the samples (the first n % workers workers take one
extra) from its own Generator. Output is concatenated in worker order,
so a fixed (seed, workers) pair always gives the same list.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Mapping

import numpy as np

from ..errors import ZeroProbabilityStepError
from .engine import ZERO_PROBABILITY
from .schedule import MeasurementSchedule, Trajectory

logger = logging.getLogger(__name__)


def _projector_stacks(s: MeasurementSchedule) -> list[np.ndarray]:
    return [np.stack([c.projector for c in obs]) for obs in s.observables]


def sample_trajectory(
    s: MeasurementSchedule,
    rng: np.random.Generator,
    _stacks: list[np.ndarray] | None = None,
) -> Trajectory:
    """Draw one trajectory by sequential collapse."""
    stacks = _stacks if _stacks is not None else _projector_stacks(s)
    rho = s.prepared_state()
    labels: list[str] = []
    last = s.n_steps - 1
    for k, obs in enumerate(s.observables):
        projectors = stacks[k]
        probs = np.clip(np.einsum("kij,ji->k", projectors, rho).real, 0.0, None)
        cumulative = np.cumsum(probs)
        total = cumulative[-1]
        if total <= ZERO_PROBABILITY:
            raise ZeroProbabilityStepError(k)
        i = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
        i = min(i, len(probs) - 1)
        labels.append(obs.labels[i])
        p = projectors[i]
        rho = p @ rho @ p / probs[i]
        if k < last:
            u = s.unitaries[k]
            rho = u @ rho @ u.conj().T
    return Trajectory(tuple(labels))


def _shares(n: int, workers: int) -> list[int]:
    base, extra = divmod(n, workers)
    return [base + (1 if k < extra else 0) for k in range(workers)]


def sample_trajectories(
    s: MeasurementSchedule, n: int, seed: int, workers: int = 1
) -> list[Trajectory]:
    """Draw n trajectories with per-worker RNG streams split from seed."""
    workers = max(1, int(workers))
    streams = np.random.SeedSequence(seed).spawn(workers)
    shares = _shares(n, workers)
    stacks = _projector_stacks(s)
    logger.debug("sample_trajectories: n=%d seed=%d shares=%s", n, seed, shares)

    def run(k: int) -> list[Trajectory]:
        rng = np.random.default_rng(streams[k])
        return [sample_trajectory(s, rng, stacks) for _ in range(shares[k])]

    if workers == 1:
        return run(0)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, range(workers)))
    return [omega for part in parts for omega in part]


def empirical_distribution(samples: Iterable[Trajectory]) -> dict[Trajectory, float]:
    """Relative frequency of each sampled trajectory."""
    counts = Counter(samples)
    n = sum(counts.values())
    return {omega: c / n for omega, c in counts.items()}


def total_variation(samples: Iterable[Trajectory], exact: Mapping[Trajectory, float]) -> float:
    """Half the L1 distance between the empirical and exact distributions."""
    empirical = empirical_distribution(samples)
    keys = sorted(set(empirical) | set(exact))
    return 0.5 * sum(abs(empirical.get(w, 0.0) - exact.get(w, 0.0)) for w in keys)
