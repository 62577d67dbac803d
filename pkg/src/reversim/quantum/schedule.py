"""Schedule: measurement times, per-step observables and trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from ..errors import DimensionMismatchError, InvalidStateError, UnknownLabelError
from .hilbert import DensityMatrix, HermitianOperator, StateVector
from .observables import ObservableDecomposition

TRAJECTORY_SEPARATOR = ">"


@dataclass(frozen=True, order=True)
class Trajectory:
    """An outcome sequence omega = (alpha_0, ..., alpha_t), one label per scheduled time.

    Example:
        omega = Trajectory(("1", "0", "-1"))
        str(omega)                      # '1>0>-1'
        Trajectory.parse("1>0>-1") == omega
    """

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def parse(cls, text: str) -> Trajectory:
        return cls(tuple(part.strip() for part in text.split(TRAJECTORY_SEPARATOR)))

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, index: int) -> str:
        return self.labels[index]

    def __str__(self) -> str:
        return TRAJECTORY_SEPARATOR.join(self.labels)


class MeasurementSchedule:
    """When and what is measured, under which dynamics, from which state.

    The initial state is given at the preparation time (default t_0) and
    evolves freely until the first measurement at t_0. Between
    consecutive measurements the state evolves with U_k = exp(-i (t_k - t_{k-1}) H).

    Example:
        obs = decompose_observable(build_magnetization(3))
        sched = MeasurementSchedule.uniform(h, obs, steps=4)
        sched.intervals          # (1.0, 1.0, 1.0)
    """

    __slots__ = (
        "_times",
        "_observables",
        "_hamiltonian",
        "_initial_state",
        "_preparation_time",
        "_eigvals",
        "_eigvecs",
        "_unitaries",
    )

    def __init__(
        self,
        times: Sequence[float],
        observables: Sequence[ObservableDecomposition],
        hamiltonian: HermitianOperator,
        initial_state: DensityMatrix | StateVector | None = None,
        preparation_time: float | None = None,
    ) -> None:
        times = tuple(float(t) for t in times)
        if not times:
            raise InvalidStateError("Schedule needs at least one measurement time")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidStateError(f"Measurement times must be strictly increasing: {times}")
        if len(observables) != len(times):
            raise DimensionMismatchError(len(times), len(observables), "observables per time")
        dim = hamiltonian.dim
        for k, obs in enumerate(observables):
            if obs.dim != dim:
                raise DimensionMismatchError(dim, obs.dim, f"observable at step {k}")
        if initial_state is None:
            initial_state = DensityMatrix.maximally_mixed(dim)
        elif isinstance(initial_state, StateVector):
            initial_state = initial_state.to_density()
        if initial_state.dim != dim:
            raise DimensionMismatchError(dim, initial_state.dim, "initial state")
        if preparation_time is None:
            preparation_time = times[0]
        if preparation_time > times[0]:
            raise InvalidStateError("Preparation time must not come after the first measurement")

        self._times = times
        self._observables = tuple(observables)
        self._hamiltonian = hamiltonian
        self._initial_state = initial_state
        self._preparation_time = float(preparation_time)
        self._eigvals, self._eigvecs = np.linalg.eigh(hamiltonian.entries)
        self._unitaries = tuple(self.propagator(b - a) for a, b in zip(times, times[1:]))

    @classmethod
    def uniform(
        cls,
        hamiltonian: HermitianOperator,
        observable: ObservableDecomposition,
        steps: int,
        dt: float = 1.0,
        t0: float = 0.0,
        initial_state: DensityMatrix | StateVector | None = None,
        preparation_time: float | None = None,
    ) -> MeasurementSchedule:
        """Same observable measured at t0, t0 + dt, ..., t0 + (steps - 1) dt."""
        if steps < 1:
            raise InvalidStateError(f"steps must be >= 1, got {steps}")
        times = [t0 + k * dt for k in range(steps)]
        return cls(times, [observable] * steps, hamiltonian, initial_state, preparation_time)

    @property
    def times(self) -> tuple[float, ...]:
        return self._times

    @property
    def observables(self) -> tuple[ObservableDecomposition, ...]:
        return self._observables

    @property
    def hamiltonian(self) -> HermitianOperator:
        return self._hamiltonian

    @property
    def initial_state(self) -> DensityMatrix:
        return self._initial_state

    @property
    def preparation_time(self) -> float:
        return self._preparation_time

    @property
    def dim(self) -> int:
        return self._hamiltonian.dim

    @property
    def n_steps(self) -> int:
        """Number of measurement times."""
        return len(self._times)

    @property
    def intervals(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self._times, self._times[1:]))

    @property
    def unitaries(self) -> tuple[np.ndarray, ...]:
        """U_1 .. U_n between consecutive measurements."""
        return self._unitaries

    def propagator(self, dt: float) -> np.ndarray:
        """exp(-i dt H) from the cached eigensystem."""
        v = self._eigvecs
        return (v * np.exp(-1j * dt * self._eigvals)) @ v.conj().T

    def prepared_state(self) -> np.ndarray:
        """Density matrix just before the first measurement."""
        rho = self._initial_state.entries
        lead = self._times[0] - self._preparation_time
        if lead == 0.0:
            return np.array(rho)
        u = self.propagator(lead)
        return u @ rho @ u.conj().T

    def is_symmetric_spacing(self, tol: float = 1e-12) -> bool:
        """True when the interval pattern reads the same backwards."""
        gaps = np.array(self.intervals)
        return bool(np.all(np.abs(gaps - gaps[::-1]) <= tol)) if gaps.size else True

    def reversed(self) -> MeasurementSchedule:
        """Observables and intervals in reverse order, same H and initial state."""
        t0, tn = self._times[0], self._times[-1]
        times = [t0 + (tn - t) for t in reversed(self._times)]
        return MeasurementSchedule(
            times,
            list(reversed(self._observables)),
            self._hamiltonian,
            self._initial_state,
        )

    def check_trajectory(self, omega: Trajectory) -> None:
        """Raise unless omega has one known label per scheduled time."""
        if len(omega) != self.n_steps:
            raise DimensionMismatchError(self.n_steps, len(omega), "trajectory length")
        for k, (label, obs) in enumerate(zip(omega, self._observables)):
            if label not in obs:
                raise UnknownLabelError(label, obs.labels, step=k)

    def n_trajectories(self) -> int:
        """Size of the outcome space, product of conditions per step."""
        return int(np.prod([len(obs) for obs in self._observables], dtype=object))

    def __repr__(self) -> str:
        return f"MeasurementSchedule(dim={self.dim}, steps={self.n_steps}, times={self._times})"


class TrajectoryDistribution(Mapping[Trajectory, float]):
    """Exact probabilities of every trajectory of a schedule.

    Zero-probability trajectories are kept as exact zeros.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[Trajectory, float], tol: float = 1e-10) -> None:
        total = float(sum(entries.values()))
        if abs(total - 1.0) > tol:
            raise InvalidStateError("Trajectory probabilities do not sum to 1", abs(total - 1.0))
        self._entries = dict(entries)

    def __getitem__(self, omega: Trajectory) -> float:
        return self._entries[omega]

    def __iter__(self) -> Iterator[Trajectory]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def total(self) -> float:
        return float(sum(self._entries.values()))

    def support(self, threshold: float = 0.0) -> list[Trajectory]:
        """Trajectories with probability above threshold."""
        return [w for w, p in self._entries.items() if p > threshold]

    def marginal(self, step: int) -> dict[str, float]:
        """Distribution of the label at one step."""
        out: dict[str, float] = {}
        for omega, p in self._entries.items():
            out[omega[step]] = out.get(omega[step], 0.0) + p
        return out

    def __repr__(self) -> str:
        return f"TrajectoryDistribution({len(self)} trajectories)"
