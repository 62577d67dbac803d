"""System: finite invertible dynamics with a time-reversal involution.

States are the integers 0..n-1. The dynamics f and the involution pi are
permutation tables, so every identity below is checked by exact counting:

    mechanical reversibility   pi f^t pi = f^{-t}
    macro transitions          Prob[B | A] = |A & f^{-t} B| / |A|
    detailed balance           Prob[B | A] / Prob[pi A | pi B] = |B| / |A|
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..errors import (
    DimensionMismatchError,
    EmptyMacrostateError,
    NotAPermutationError,
    NotAnInvolutionError,
    StateOutOfRangeError,
)
from ..protocols import Involution

logger = logging.getLogger(__name__)


class PermutationMap:
    """A bijection of {0, ..., n-1} stored as an index table.

    Example:
        shift = PermutationMap([1, 2, 0])
        shift.apply(2)        # 0
        shift.power(-1)       # PermutationMap([2, 0, 1])
    """

    __slots__ = ("_table",)

    def __init__(self, table: Sequence[int] | np.ndarray, what: str = "map") -> None:
        arr = np.array(table, dtype=np.int64)
        n = arr.shape[0]
        if arr.ndim != 1 or np.any(arr < 0) or np.any(arr >= n):
            raise NotAPermutationError(what, "entries must lie in 0..n-1")
        values, counts = np.unique(arr, return_counts=True)
        if values.size != n:
            dup = int(values[np.argmax(counts)])
            raise NotAPermutationError(what, f"value {dup} is hit more than once")
        arr.setflags(write=False)
        self._table = arr

    @classmethod
    def identity(cls, n: int) -> PermutationMap:
        return cls(np.arange(n))

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def dim(self) -> int:
        return self._table.shape[0]

    def apply(self, x: int) -> int:
        return int(self._table[x])

    def apply_all(self, xs: np.ndarray) -> np.ndarray:
        return self._table[xs]

    def inverse(self) -> PermutationMap:
        inv = np.empty_like(self._table)
        inv[self._table] = np.arange(self.dim)
        return PermutationMap(inv)

    def compose(self, other: PermutationMap) -> PermutationMap:
        """self after other."""
        return PermutationMap(self._table[other._table])

    def power(self, t: int) -> PermutationMap:
        """f^t for any integer t, by repeated squaring."""
        base = self if t >= 0 else self.inverse()
        result = np.arange(self.dim)
        square = base._table
        k = abs(t)
        while k:
            if k & 1:
                result = square[result]
            square = square[square]
            k >>= 1
        return PermutationMap(result)

    def is_involution(self) -> bool:
        return bool(np.array_equal(self._table[self._table], np.arange(self.dim)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PermutationMap) and np.array_equal(self._table, other._table)

    def __hash__(self) -> int:
        return hash(self._table.tobytes())

    def __repr__(self) -> str:
        return f"PermutationMap(dim={self.dim})"


# Keyed by table contents, shared by every system built on the same f
@functools.lru_cache(maxsize=256)
def _power(f: PermutationMap, t: int) -> PermutationMap:
    return f.power(t)


class FiniteDynamicalSystem:
    """A bijection f together with an involution pi on the same finite set."""

    __slots__ = ("_f", "_pi", "_labels")

    def __init__(
        self,
        f: PermutationMap,
        pi: PermutationMap,
        labels: Sequence[str] | None = None,
    ) -> None:
        if f.dim != pi.dim:
            raise DimensionMismatchError(f.dim, pi.dim, "involution")
        if not pi.is_involution():
            idx = np.arange(pi.dim)
            witness = int(np.flatnonzero(pi.table[pi.table] != idx)[0])
            raise NotAnInvolutionError(witness)
        if labels is not None and len(labels) != f.dim:
            raise DimensionMismatchError(f.dim, len(labels), "state labels")
        self._f = f
        self._pi = pi
        self._labels = tuple(labels) if labels is not None else None

    @property
    def f(self) -> PermutationMap:
        return self._f

    @property
    def pi(self) -> PermutationMap:
        return self._pi

    @property
    def n_states(self) -> int:
        return self._f.dim

    def label(self, x: int) -> str:
        return self._labels[x] if self._labels is not None else str(x)

    def flow(self, t: int) -> PermutationMap:
        """f^t."""
        return _power(self._f, t)

    def __repr__(self) -> str:
        return f"FiniteDynamicalSystem(n_states={self.n_states})"


@dataclass(frozen=True)
class Macrostate:
    """A set of microstates; entropy log |M|."""

    members: frozenset[int]
    name: str = "M"

    @classmethod
    def of(cls, members: Iterable[int], name: str = "M") -> Macrostate:
        return cls(frozenset(int(m) for m in members), name)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def entropy(self) -> float:
        if not self.members:
            raise EmptyMacrostateError(self.name)
        return math.log(len(self.members))

    def validate(self, n_states: int) -> Macrostate:
        """Raise StateOutOfRangeError unless every member lies in 0..n_states-1."""
        bad = [m for m in self.members if not 0 <= m < n_states]
        if bad:
            raise StateOutOfRangeError(self.name, min(bad), n_states)
        return self

    def mask(self, n_states: int) -> np.ndarray:
        self.validate(n_states)
        out = np.zeros(n_states, dtype=bool)
        out[list(self.members)] = True
        return out

    def image(self, m: Involution, name: str | None = None) -> Macrostate:
        return Macrostate(frozenset(m.apply(x) for x in self.members), name or f"pi({self.name})")


# ═══════════════════════════════════════════════════════════════════════════════
# Builders
# ═══════════════════════════════════════════════════════════════════════════════


def free_motion(n: int) -> FiniteDynamicalSystem:
    """Free motion on Z_n x Z_n: f(q, p) = (q + p mod n, p), pi(q, p) = (q, -p mod n).

    State (q, p) has index q * n + p.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    q, p = np.divmod(np.arange(n * n), n)
    f = ((q + p) % n) * n + p
    pi = q * n + (-p) % n
    labels = [f"({a},{b})" for a, b in zip(q.tolist(), p.tolist())]
    return FiniteDynamicalSystem(PermutationMap(f, "f"), PermutationMap(pi, "pi"), labels)


def permutation_system(f: Sequence[int], pi: Sequence[int]) -> FiniteDynamicalSystem:
    """System from explicit permutation tables."""
    return FiniteDynamicalSystem(PermutationMap(f, "f"), PermutationMap(pi, "pi"))


def random_permutation_system(n: int, rng: np.random.Generator) -> FiniteDynamicalSystem:
    """A random f with the identity as pi; reversible only by accident."""
    return FiniteDynamicalSystem(PermutationMap(rng.permutation(n), "f"), PermutationMap.identity(n))


def random_macrostate(
    sys: FiniteDynamicalSystem,
    rng: np.random.Generator,
    size: int | None = None,
    name: str = "M",
) -> Macrostate:
    """Seeded nonempty macrostate; size drawn uniformly from 1..n when not given."""
    n = sys.n_states
    k = int(rng.integers(1, n + 1)) if size is None else size
    return Macrostate.of(rng.choice(n, size=k, replace=False).tolist(), name)


# ═══════════════════════════════════════════════════════════════════════════════
# Operations
# ═══════════════════════════════════════════════════════════════════════════════


def iterate(sys: FiniteDynamicalSystem, x: int, t: int) -> int:
    """f^t(x); negative t runs the dynamics backwards."""
    return sys.flow(t).apply(x)


@dataclass(frozen=True)
class MechanicalReversibility:
    holds: bool
    witness: int | None


def check_mechanical_reversibility(sys: FiniteDynamicalSystem, t: int) -> MechanicalReversibility:
    """Check pi(f^t(pi(x))) == f^{-t}(x) for every state; witness is the first failing x."""
    if t < 1:
        raise ValueError(f"t must be a positive integer, got {t}")
    pi = sys.pi.table
    lhs = pi[sys.flow(t).table[pi]]
    bad = np.flatnonzero(lhs != sys.flow(-t).table)
    if bad.size:
        logger.debug("Reversibility fails at t=%d for %d states", t, bad.size)
        return MechanicalReversibility(False, int(bad[0]))
    return MechanicalReversibility(True, None)


def _transition_count(sys: FiniteDynamicalSystem, a: Macrostate, b: Macrostate, t: int) -> int:
    if not a.members:
        return 0
    members = np.fromiter(a.members, dtype=np.int64)
    landed = sys.flow(t).apply_all(members)
    return int(b.mask(sys.n_states)[landed].sum())


def macro_transition_probability(
    sys: FiniteDynamicalSystem, a: Macrostate, b: Macrostate, t: int
) -> Fraction:
    """Exact fraction of A whose image under f^t lies in B.

    Raises:
        EmptyMacrostateError: A is empty
        StateOutOfRangeError: A or B names a state the system does not have
    """
    a.validate(sys.n_states)
    b.validate(sys.n_states)
    if not a.members:
        raise EmptyMacrostateError(a.name)
    return Fraction(_transition_count(sys, a, b, t), a.size)


@dataclass(frozen=True)
class DetailedBalanceIdentity:
    """Both sides of Prob[B | A] / Prob[pi A | pi B] = |B| / |A|.

    Attributes:
        lhs: Ratio of conditionals (None when undefined)
        rhs: |B| / |A|, the exact form of exp(S(B) - S(A))
        equal: lhs == rhs (False when undefined)
        defined: Whether both conditionals exist and the denominator is nonzero
        reason: Why lhs is undefined
    """

    lhs: Fraction | None
    rhs: Fraction | None
    equal: bool
    defined: bool
    reason: str = ""


def check_detailed_balance_identity(
    sys: FiniteDynamicalSystem, a: Macrostate, b: Macrostate, t: int
) -> DetailedBalanceIdentity:
    """Compare the macro transition ratio with the volume ratio, exactly.

    Empty macrostates are reported through `defined`; out-of-range states raise
    StateOutOfRangeError.
    """
    a.validate(sys.n_states)
    b.validate(sys.n_states)
    if not a.members or not b.members:
        return DetailedBalanceIdentity(None, None, False, False, "empty macrostate")
    rhs = Fraction(b.size, a.size)
    forward = macro_transition_probability(sys, a, b, t)
    backward = macro_transition_probability(sys, b.image(sys.pi), a.image(sys.pi), t)
    if backward == 0:
        return DetailedBalanceIdentity(None, rhs, False, False, "reverse transition has probability zero")
    lhs = forward / backward
    return DetailedBalanceIdentity(lhs, rhs, lhs == rhs, True)
