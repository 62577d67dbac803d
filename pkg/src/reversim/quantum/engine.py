"""Engine: exact probabilities of repeated projective measurements.

For a schedule with measurements at t_0 < ... < t_n and outcomes
omega = (alpha_0, ..., alpha_n),

    Prob[omega] = Tr[P_n K rho_0 K^dagger],  K = U_n P_{n-1} ... U_1 P_0

with U_k = exp(-i (t_k - t_{k-1}) H). Everything else here is built on
that chain trace: full enumeration, time-reversed trajectories,
dimension ratios, conditionals on both endpoints, marginals.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .. import config
from ..errors import (
    EndpointsUnreachableError,
    EnumerationCapError,
    InvalidStateError,
    PiNotCovariantError,
    PreconditionViolated,
    ProbabilityRangeError,
)
from .hilbert import AntiunitaryInvolution, hamiltonian_reversal_deviation
from .observables import ConditionReversalMap, reverse_conditions
from .schedule import MeasurementSchedule, Trajectory, TrajectoryDistribution

if TYPE_CHECKING:
    from ..markov.chain import MarkovChain

logger = logging.getLogger(__name__)

# Values this far outside [0, 1] are clamped silently
CLAMP_SLACK = 1e-12
# Probabilities at or below this are treated as zero in ratio checks
ZERO_PROBABILITY = 1e-14
# Tolerance for the reversal-theorem hypotheses
HYPOTHESIS_TOL = 1e-10


def clamp_probability(p: float) -> float:
    """Clamp roundoff just outside [0, 1]; reject anything further out."""
    if 0.0 <= p <= 1.0:
        return p
    if -CLAMP_SLACK <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + CLAMP_SLACK:
        return 1.0
    raise ProbabilityRangeError(p)


def _sandwich(p: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return p @ rho @ p


def _conjugate(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return u @ rho @ u.conj().T


def chain_weight(s: MeasurementSchedule, omega: Trajectory) -> float:
    """Unnormalized trace Tr[P_n K rho_0 K^dagger] (no validation, no clamping)."""
    rho = s.prepared_state()
    last = s.n_steps - 1
    for k, (label, obs) in enumerate(zip(omega, s.observables)):
        rho = _sandwich(obs.projector(label), rho)
        if k < last:
            rho = _conjugate(s.unitaries[k], rho)
    return float(np.trace(rho).real)


def trajectory_probability(s: MeasurementSchedule, omega: Trajectory) -> float:
    """Exact probability of observing omega under schedule s."""
    s.check_trajectory(omega)
    return clamp_probability(chain_weight(s, omega))


def _check_cap(count: int) -> None:
    cap = int(config.get_setting("enumeration_cap"))
    if count > cap:
        raise EnumerationCapError(count, cap)


def _enumerate_branch(
    s: MeasurementSchedule, k: int, rho: np.ndarray, prefix: tuple[str, ...]
) -> list[tuple[Trajectory, float]]:
    obs = s.observables[k]
    out: list[tuple[Trajectory, float]] = []
    for c in obs:
        projected = _sandwich(c.projector, rho)
        labels = prefix + (c.label,)
        if k == s.n_steps - 1:
            out.append((Trajectory(labels), clamp_probability(float(np.trace(projected).real))))
        else:
            evolved = _conjugate(s.unitaries[k], projected)
            out.extend(_enumerate_branch(s, k + 1, evolved, labels))
    return out


def enumerate_distribution(s: MeasurementSchedule, workers: int = 1) -> TrajectoryDistribution:
    """Exact probability of every trajectory.

    The outcome tree is walked depth first so shared prefixes are
    projected once. With workers > 1 the first-step branches run in a
    thread pool; results are merged in label order, so the output does
    not depend on the worker count.

    Raises:
        EnumerationCapError: more trajectories than the configured cap
    """
    count = s.n_trajectories()
    _check_cap(count)
    logger.debug("enumerate_distribution: %d trajectories, %d workers", count, workers)

    rho = s.prepared_state()
    first = s.observables[0]

    def branch(label: str) -> list[tuple[Trajectory, float]]:
        projected = _sandwich(first.projector(label), rho)
        if s.n_steps == 1:
            return [(Trajectory((label,)), clamp_probability(float(np.trace(projected).real)))]
        return _enumerate_branch(s, 1, _conjugate(s.unitaries[0], projected), (label,))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(branch, first.labels))
    else:
        parts = [branch(label) for label in first.labels]
    return TrajectoryDistribution(dict(itertools.chain.from_iterable(parts)))


def reverse_trajectory(
    omega: Trajectory, maps: ConditionReversalMap | Sequence[ConditionReversalMap]
) -> Trajectory:
    """Theta omega = (alpha_n', ..., alpha_0').

    Args:
        omega: Forward trajectory
        maps: One reversal map per forward step, or a single map for all steps
    """
    n = len(omega)
    if isinstance(maps, ConditionReversalMap):
        maps = [maps] * n
    if len(maps) != n:
        raise InvalidStateError(f"Need {n} reversal maps, got {len(maps)}")
    return Trajectory(tuple(maps[k][omega[k]] for k in reversed(range(n))))


# ═══════════════════════════════════════════════════════════════════════════════
# Reversal theorem
# ═══════════════════════════════════════════════════════════════════════════════


def reversal_hypotheses(
    s: MeasurementSchedule, pi: AntiunitaryInvolution, tol: float = HYPOTHESIS_TOL
) -> list[ConditionReversalMap]:
    """Check every hypothesis of Prob[omega] = Prob[Theta omega].

    Hypotheses: rho_0 = 1/d, pi H pi = H, every observable closed under
    pi, and a time spacing that reads the same backwards.

    Returns:
        The per-step condition reversal maps

    Raises:
        PreconditionViolated: naming the first hypothesis that fails
    """
    if not s.initial_state.is_maximally_mixed(tol):
        raise PreconditionViolated("non-uniform initial state", "rho_0 must equal 1/d")
    h_dev = hamiltonian_reversal_deviation(s.hamiltonian, pi)
    if h_dev > tol:
        raise PreconditionViolated("pi H pi != H", f"max deviation {h_dev:.3e}")
    maps = []
    for k, obs in enumerate(s.observables):
        try:
            maps.append(reverse_conditions(pi, obs, tol))
        except PiNotCovariantError as e:
            raise PreconditionViolated("non-covariant observables", f"step {k}: {e}") from e
    if not s.is_symmetric_spacing():
        raise PreconditionViolated("asymmetric time spacing", f"intervals {s.intervals}")
    return maps


@dataclass(frozen=True)
class ReversalRow:
    """One line of a reversal report."""

    omega: Trajectory
    reversed: Trajectory
    probability: float
    reversed_probability: float

    @property
    def deviation(self) -> float:
        return abs(self.probability - self.reversed_probability)


@dataclass(frozen=True)
class TimeReversalReport:
    """Result of verify_time_reversal.

    Attributes:
        max_deviation: max over omega of |Prob[omega] - Prob[Theta omega]|
        rows: One row per forward trajectory, in enumeration order
        witness: The trajectory attaining max_deviation
    """

    max_deviation: float
    rows: tuple[ReversalRow, ...]
    witness: Trajectory | None

    def holds(self, tol: float) -> bool:
        return self.max_deviation <= tol


def verify_time_reversal(
    s: MeasurementSchedule, pi: AntiunitaryInvolution, workers: int = 1
) -> TimeReversalReport:
    """Compare every trajectory's probability with its time-reversal's."""
    maps = reversal_hypotheses(s, pi)
    forward = enumerate_distribution(s, workers)
    backward = enumerate_distribution(s.reversed(), workers)
    rows = []
    for omega, p in forward.items():
        theta = reverse_trajectory(omega, maps)
        rows.append(ReversalRow(omega, theta, p, backward[theta]))
    worst = max(rows, key=lambda r: r.deviation)
    logger.debug("verify_time_reversal: max deviation %.3e at %s", worst.deviation, worst.omega)
    return TimeReversalReport(worst.deviation, tuple(rows), worst.omega)


@dataclass(frozen=True)
class DetailedBalanceRatio:
    """Prob[omega | alpha_0] / Prob[Theta omega | alpha_n'] against d_{alpha_n} / d_{alpha_0}.

    Attributes:
        defined: False when Prob[Theta omega] vanishes; ratio is then nan
    """

    omega: Trajectory
    ratio: float
    predicted: float
    defined: bool

    @property
    def deviation(self) -> float:
        return abs(self.ratio - self.predicted) if self.defined else float("nan")


def detailed_balance_ratio(
    s: MeasurementSchedule,
    omega: Trajectory,
    pi: AntiunitaryInvolution,
    _maps: list[ConditionReversalMap] | None = None,
    _reversed: MeasurementSchedule | None = None,
) -> DetailedBalanceRatio:
    """Conditional forward/backward ratio and its eigenspace-dimension prediction.

    Conditioning on the first outcome uses p(alpha) = d_alpha / d, the
    probability of alpha under rho_0 = 1/d.
    """
    maps = _maps if _maps is not None else reversal_hypotheses(s, pi)
    rev = _reversed if _reversed is not None else s.reversed()
    s.check_trajectory(omega)
    theta = reverse_trajectory(omega, maps)
    d = s.dim
    first, last = s.observables[0], s.observables[-1]
    d_start = first.dimension_of(omega[0])
    d_end = last.dimension_of(omega[-1])
    predicted = d_end / d_start

    p_forward = trajectory_probability(s, omega)
    p_backward = trajectory_probability(rev, theta)
    if p_backward <= ZERO_PROBABILITY or p_forward <= ZERO_PROBABILITY:
        return DetailedBalanceRatio(omega, float("nan"), predicted, defined=False)
    cond_forward = p_forward / (d_start / d)
    cond_backward = p_backward / (last.dimension_of(theta[0]) / d)
    return DetailedBalanceRatio(omega, cond_forward / cond_backward, predicted, defined=True)


def detailed_balance_table(
    s: MeasurementSchedule, pi: AntiunitaryInvolution
) -> list[DetailedBalanceRatio]:
    """detailed_balance_ratio for every trajectory of the schedule."""
    _check_cap(s.n_trajectories())
    maps = reversal_hypotheses(s, pi)
    rev = s.reversed()
    labels = [obs.labels for obs in s.observables]
    table = [
        detailed_balance_ratio(s, Trajectory(combo), pi, _maps=maps, _reversed=rev)
        for combo in itertools.product(*labels)
    ]
    skipped = sum(not r.defined for r in table)
    if skipped:
        logger.debug("detailed_balance_table: %d undefined ratios excluded", skipped)
    return table


# ═══════════════════════════════════════════════════════════════════════════════
# Conditioning on both endpoints
# ═══════════════════════════════════════════════════════════════════════════════


def _nonselective(obs_projectors: list[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum((_sandwich(p, rho) for p in obs_projectors), np.zeros_like(rho))


def endpoint_weight(s: MeasurementSchedule, alpha_0: str, alpha_t: str) -> float:
    """Sum of chain weights over all intermediate outcomes, for fixed endpoints.

    Computed with the non-selective measurement channel at intermediate
    times, so no intermediate sequence is enumerated.
    """
    if s.n_steps < 2:
        raise InvalidStateError("Conditioning on both endpoints needs at least two times")
    rho = _sandwich(s.observables[0].projector(alpha_0), s.prepared_state())
    for k in range(1, s.n_steps - 1):
        rho = _conjugate(s.unitaries[k - 1], rho)
        rho = _nonselective([c.projector for c in s.observables[k]], rho)
    rho = _conjugate(s.unitaries[-1], rho)
    return float(np.trace(s.observables[-1].projector(alpha_t) @ rho).real)


def abl_conditional(
    s: MeasurementSchedule, alpha_0: str, alpha_t: str, intermediate: Sequence[str]
) -> float:
    """Prob[alpha_1 ... alpha_{n-1} | alpha_0, alpha_n].

    Raises:
        EndpointsUnreachableError: the endpoint pair has probability zero
    """
    omega = Trajectory((alpha_0, *intermediate, alpha_t))
    s.check_trajectory(omega)
    denominator = endpoint_weight(s, alpha_0, alpha_t)
    if denominator <= ZERO_PROBABILITY:
        raise EndpointsUnreachableError(alpha_0, alpha_t)
    return clamp_probability(chain_weight(s, omega) / denominator)


def abl_distribution(
    s: MeasurementSchedule, alpha_0: str, alpha_t: str
) -> dict[tuple[str, ...], float]:
    """Every intermediate sequence's conditional probability for fixed endpoints."""
    middle = [obs.labels for obs in s.observables[1:-1]]
    _check_cap(math.prod(len(m) for m in middle))
    denominator = endpoint_weight(s, alpha_0, alpha_t)
    if denominator <= ZERO_PROBABILITY:
        raise EndpointsUnreachableError(alpha_0, alpha_t)
    return {
        combo: clamp_probability(
            chain_weight(s, Trajectory((alpha_0, *combo, alpha_t))) / denominator
        )
        for combo in itertools.product(*middle)
    }


def verify_abl_symmetry(s: MeasurementSchedule, pi: AntiunitaryInvolution) -> float:
    """Max deviation between forward and reversed endpoint-conditioned probabilities.

    Asserted only under the hypotheses of the reversal theorem; for each
    reachable endpoint pair, Prob[alpha_1..alpha_{n-1} | alpha_0, alpha_n]
    is compared with Prob[alpha_{n-1}'..alpha_1' | alpha_n', alpha_0'] on
    the reversed schedule.
    """
    maps = reversal_hypotheses(s, pi)
    rev = s.reversed()
    worst = 0.0
    for a0 in s.observables[0].labels:
        for at in s.observables[-1].labels:
            if endpoint_weight(s, a0, at) <= ZERO_PROBABILITY:
                continue
            forward = abl_distribution(s, a0, at)
            backward = abl_distribution(rev, maps[-1][at], maps[0][a0])
            for combo, p in forward.items():
                theta = reverse_trajectory(Trajectory((a0, *combo, at)), maps)
                worst = max(worst, abs(p - backward[theta.labels[1:-1]]))
    return worst


# ═══════════════════════════════════════════════════════════════════════════════
# Marginals and two-time chains
# ═══════════════════════════════════════════════════════════════════════════════


def marginals(s: MeasurementSchedule) -> list[dict[str, float]]:
    """Single-time outcome distribution at every scheduled time."""
    rho = s.prepared_state()
    out = []
    for k, obs in enumerate(s.observables):
        out.append(
            {c.label: clamp_probability(float(np.trace(c.projector @ rho).real)) for c in obs}
        )
        if k < s.n_steps - 1:
            rho = _conjugate(s.unitaries[k], _nonselective([c.projector for c in obs], rho))
    return out


def measurement_chain(s: MeasurementSchedule, step: int = 0) -> MarkovChain:
    """Transition matrix p(alpha, beta) between the outcomes at step and step + 1.

    Rows of outcomes that never occur at `step` are set to stay put.
    """
    from ..markov.chain import MarkovChain

    if not 0 <= step < s.n_steps - 1:
        raise InvalidStateError(f"step must be in 0..{s.n_steps - 2}, got {step}")
    rho = s.prepared_state()
    for k in range(step):
        rho = _conjugate(s.unitaries[k], _nonselective([c.projector for c in s.observables[k]], rho))
    here, nxt = s.observables[step], s.observables[step + 1]
    if here.labels != nxt.labels:
        raise InvalidStateError("measurement_chain needs the same observable at both steps")
    u = s.unitaries[step]
    n = len(here)
    p = np.zeros((n, n))
    for i, c in enumerate(here):
        projected = _sandwich(c.projector, rho)
        mass = float(np.trace(projected).real)
        if mass <= ZERO_PROBABILITY:
            p[i, i] = 1.0
            continue
        evolved = _conjugate(u, projected)
        for j, c2 in enumerate(nxt):
            p[i, j] = float(np.trace(c2.projector @ evolved).real) / mass
    p = np.clip(p, 0.0, None)
    p /= p.sum(axis=1, keepdims=True)
    return MarkovChain(here.labels, p)
