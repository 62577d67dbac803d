"""Chain: finite Markov chains, their Bayes reversal and detailed balance.

For a stationary chain with transition matrix p and stationary
distribution rho, the time-reversed chain follows from Bayes' rule:

    p_rev(y, y') = p(y', y) rho(y') / rho(y)

The chain is reversible (detailed balance) exactly when p_rev = p, i.e.
rho(y) p(y, y') = rho(y') p(y', y) for every pair.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Any, Hashable, Sequence

import numpy as np

from ..errors import (
    DimensionMismatchError,
    InvalidStateError,
    NotAPermutationError,
    NotStochasticError,
    ReducibleChainError,
    RowSumOverflowError,
    UnknownLabelError,
    ZeroStationaryMassError,
)

logger = logging.getLogger(__name__)

ROW_TOL = 1e-12
STATIONARY_TOL = 1e-10

State = Hashable


class MarkovChain:
    """A finite, discrete-time Markov chain.

    Attributes:
        states: State labels, in matrix order
        p: Row-stochastic transition matrix p(x, x')
        stationary: rho with rho p = rho, if known

    Example:
        chain = MarkovChain(["a", "b"], [[0.9, 0.1], [0.2, 0.8]])
        chain = chain.with_stationary()
        chain.stationary            # array([2/3, 1/3])
    """

    __slots__ = ("_states", "_index", "_p", "_stationary")

    def __init__(
        self,
        states: Sequence[State],
        p: np.ndarray | Sequence[Sequence[float]],
        stationary: np.ndarray | Sequence[float] | None = None,
    ) -> None:
        states = tuple(states)
        p = np.array(p, dtype=float)
        n = len(states)
        if p.shape != (n, n):
            raise DimensionMismatchError((n, n), tuple(p.shape), "transition matrix")
        if len(set(states)) != n:
            raise InvalidStateError("State labels must be distinct")
        if np.any(p < 0):
            raise NotStochasticError(float(-p.min()), int(np.argmin(p.min(axis=1))))
        row_dev = np.abs(p.sum(axis=1) - 1.0)
        if np.any(row_dev > ROW_TOL):
            raise NotStochasticError(float(row_dev.max()), int(np.argmax(row_dev)))
        p.setflags(write=False)

        if stationary is not None:
            rho = np.array(stationary, dtype=float)
            if rho.shape != (n,):
                raise DimensionMismatchError(n, rho.shape, "stationary distribution")
            if np.any(rho < 0) or abs(rho.sum() - 1.0) > STATIONARY_TOL:
                raise InvalidStateError("Stationary distribution is not a distribution")
            dev = float(np.max(np.abs(rho @ p - rho)))
            if dev > STATIONARY_TOL:
                raise InvalidStateError("rho p differs from rho", dev)
            rho.setflags(write=False)
            stationary = rho

        self._states = states
        self._index = {s: i for i, s in enumerate(states)}
        self._p = p
        self._stationary = stationary

    @classmethod
    def from_joint(cls, states: Sequence[State], joint: np.ndarray) -> MarkovChain:
        """Chain from a two-time joint distribution Prob[X_k = x, X_{k+1} = x']."""
        joint = np.asarray(joint, dtype=float)
        rows = joint.sum(axis=1)
        if np.any(rows <= 0):
            raise ZeroStationaryMassError([states[i] for i in np.flatnonzero(rows <= 0)])
        return cls(states, joint / rows[:, None])

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> MarkovChain:
        """Load from {"states": [...], "p": [[...]], "stationary": [...]?}."""
        return cls(data["states"], data["p"], data.get("stationary"))

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"states": list(self._states), "p": self._p.tolist()}
        if self._stationary is not None:
            out["stationary"] = self._stationary.tolist()
        return out

    @property
    def states(self) -> tuple[State, ...]:
        return self._states

    @property
    def p(self) -> np.ndarray:
        return self._p

    @property
    def n(self) -> int:
        return len(self._states)

    @property
    def stationary(self) -> np.ndarray | None:
        return self._stationary

    def index(self, state: State) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise UnknownLabelError(str(state), [str(s) for s in self._states]) from None

    def with_stationary(self) -> MarkovChain:
        """This chain with its stationary distribution filled in."""
        if self._stationary is not None:
            return self
        return MarkovChain(self._states, self._p, stationary_distribution(self))

    def require_stationary(self) -> np.ndarray:
        return self._stationary if self._stationary is not None else stationary_distribution(self)

    def __repr__(self) -> str:
        return f"MarkovChain(n={self.n}, states={list(self._states)[:6]})"


@dataclass(frozen=True)
class PotentialForm:
    """Symmetric kernel Phi and potential V defining p = Phi e^{(V(y) - V(y'))/2}."""

    phi: np.ndarray
    v: np.ndarray
    states: tuple[State, ...] | None = None

    def __post_init__(self) -> None:
        phi = np.array(self.phi, dtype=float)
        v = np.array(self.v, dtype=float)
        n = v.shape[0]
        if phi.shape != (n, n):
            raise DimensionMismatchError((n, n), tuple(phi.shape), "Phi")
        if not np.array_equal(phi, phi.T):
            raise InvalidStateError("Phi must be exactly symmetric")
        if np.any(phi < 0):
            raise InvalidStateError("Phi must be nonnegative")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "v", v)
        if self.states is None:
            object.__setattr__(self, "states", tuple(range(n)))


# ═══════════════════════════════════════════════════════════════════════════════
# Operations
# ═══════════════════════════════════════════════════════════════════════════════


def communicating_classes(chain: MarkovChain) -> list[list[State]]:
    """Partition of the states into mutually reachable classes."""
    reach = (chain.p > 0) | np.eye(chain.n, dtype=bool)
    while True:
        nxt = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        if np.array_equal(nxt, reach):
            break
        reach = nxt
    mutual = reach & reach.T
    classes: list[list[State]] = []
    seen: set[int] = set()
    for i in range(chain.n):
        if i in seen:
            continue
        members = [j for j in range(chain.n) if mutual[i, j]]
        seen.update(members)
        classes.append([chain.states[j] for j in members])
    return classes


def stationary_distribution(chain: MarkovChain) -> np.ndarray:
    """The unique rho with rho p = rho, solved directly.

    Raises:
        ReducibleChainError: more than one communicating class
    """
    classes = communicating_classes(chain)
    if len(classes) > 1:
        raise ReducibleChainError(classes)
    n = chain.n
    a = np.vstack([chain.p.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    rho, *_ = np.linalg.lstsq(a, b, rcond=None)
    rho = np.clip(rho, 0.0, None)
    return rho / rho.sum()


def _involution_indices(chain: MarkovChain, involution: dict[State, State] | None) -> np.ndarray:
    if involution is None:
        return np.arange(chain.n)
    idx = np.array([chain.index(involution.get(s, s)) for s in chain.states])
    if sorted(idx.tolist()) != list(range(chain.n)):
        raise NotAPermutationError("state involution")
    if np.any(idx[idx] != np.arange(chain.n)):
        raise NotAPermutationError("state involution", "pi o pi differs from identity")
    return idx


def reverse_chain(
    chain: MarkovChain, involution: dict[State, State] | None = None
) -> MarkovChain:
    """Bayes reversal p_rev(y, y') = p(y', y) rho(y') / rho(y), optionally relabelled by pi.

    Raises:
        ZeroStationaryMassError: some rho(y) = 0
    """
    rho = chain.require_stationary()
    zero = np.flatnonzero(rho <= 0)
    if zero.size:
        raise ZeroStationaryMassError([chain.states[i] for i in zero])
    rev = chain.p.T * rho[None, :] / rho[:, None]
    idx = _involution_indices(chain, involution)
    rev = rev[np.ix_(idx, idx)]
    return MarkovChain(chain.states, rev, rho[idx])


@dataclass(frozen=True)
class DetailedBalanceCheck:
    """Outcome of is_detailed_balance.

    Attributes:
        holds: max_violation <= tol
        max_violation: max |rho(y) p(y, y') - rho(y') p(y', y)|
        witness: State pair attaining max_violation (None when it holds)
    """

    holds: bool
    max_violation: float
    witness: tuple[State, State] | None


def balance_violations(chain: MarkovChain) -> np.ndarray:
    """Matrix of |rho(y) p(y, y') - rho(y') p(y', y)|."""
    rho = chain.require_stationary()
    flow = rho[:, None] * chain.p
    return np.abs(flow - flow.T)


def is_detailed_balance(chain: MarkovChain, tol: float = ROW_TOL) -> DetailedBalanceCheck:
    """Check rho(y) p(y, y') = rho(y') p(y', y) for all pairs."""
    v = balance_violations(chain)
    i, j = np.unravel_index(int(np.argmax(v)), v.shape)
    worst = float(v[i, j])
    holds = worst <= tol
    witness = None if holds else (chain.states[i], chain.states[j])
    return DetailedBalanceCheck(holds, worst, witness)


def gibbs_chain(form: PotentialForm) -> MarkovChain:
    """p(y, y') = Phi(y, y') e^{(V(y) - V(y'))/2} off the diagonal, remainder on it.

    The stationary distribution e^{-V}/Z is attached to the result.

    Raises:
        RowSumOverflowError: some row's off-diagonal mass exceeds one
    """
    v = form.v
    off = form.phi * np.exp((v[:, None] - v[None, :]) / 2)
    np.fill_diagonal(off, 0.0)
    rows = off.sum(axis=1)
    over = np.flatnonzero(rows > 1.0 + ROW_TOL)
    if over.size:
        worst = int(over[np.argmax(rows[over])])
        raise RowSumOverflowError(worst, float(rows[worst]))
    p = off + np.diag(np.clip(1.0 - rows, 0.0, None))
    weights = np.exp(-(v - v.min()))
    return MarkovChain(form.states, p, weights / weights.sum())


def path_probability(chain: MarkovChain, path: Sequence[State]) -> float:
    """rho(x_0) p(x_0, x_1) ... p(x_{n-1}, x_n) under the stationary chain."""
    rho = chain.require_stationary()
    idx = [chain.index(s) for s in path]
    prob = float(rho[idx[0]])
    for a, b in zip(idx, idx[1:]):
        prob *= float(chain.p[a, b])
    return prob


def reversed_path_probability(
    chain: MarkovChain, path: Sequence[State], involution: dict[State, State] | None = None
) -> float:
    """Probability of the path run backwards (and relabelled by pi)."""
    involution = involution or {}
    return path_probability(chain, [involution.get(s, s) for s in reversed(path)])


def path_reversal_deviation(
    chain: MarkovChain, length: int, involution: dict[State, State] | None = None
) -> tuple[float, tuple[State, ...] | None]:
    """Max |Prob[path] - Prob[reversed path]| over all paths with `length` transitions."""
    worst, witness = 0.0, None
    for path in itertools.product(chain.states, repeat=length + 1):
        dev = abs(path_probability(chain, path) - reversed_path_probability(chain, path, involution))
        if dev > worst:
            worst, witness = dev, path
    return worst, witness
