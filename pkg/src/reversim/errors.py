"""Exceptions for reversim.

Two families decide how the CLI exits:
- InputError: the request itself is malformed (exit 2)
- CheckError: a hypothesis or reachability condition failed (exit 1)
"""

from __future__ import annotations

from typing import Any, Sequence


class ReversimError(Exception):
    """Base class for all reversim errors."""


class InputError(ReversimError):
    """Raised for invalid inputs: wrong shapes, unknown labels, bad scenarios."""


class CheckError(ReversimError):
    """Raised when a theorem hypothesis or a reachability condition fails."""


# =============================================================================
# Input errors
# =============================================================================


class NotHermitianError(InputError):
    """Raised when an operator differs from its conjugate transpose."""

    def __init__(self, max_asymmetry: float, tol: float = 1e-10):
        self.max_asymmetry = max_asymmetry
        self.tol = tol
        super().__init__(
            f"Operator is not Hermitian: max |A - A^dagger| = {max_asymmetry:.3e} (tol {tol:.0e})"
        )


class DimensionMismatchError(InputError):
    """Raised when two objects live on spaces of different dimension."""

    def __init__(self, expected: int | tuple[int, ...], got: int | tuple[int, ...], what: str = ""):
        self.expected = expected
        self.got = got
        msg = f"Dimension mismatch: expected {expected}, got {got}"
        if what:
            msg += f" ({what})"
        super().__init__(msg)


class InvalidStateError(InputError):
    """Raised when a state, density matrix or unitary fails its invariants."""

    def __init__(self, message: str, deviation: float | None = None):
        self.deviation = deviation
        if deviation is not None:
            message += f" (deviation {deviation:.3e})"
        super().__init__(message)


class UnknownLabelError(InputError):
    """Raised when a condition label is not part of an observable."""

    def __init__(self, label: str, available: Sequence[str] = (), step: int | None = None):
        self.label = label
        self.available = list(available)
        self.step = step
        msg = f"Unknown condition label: '{label}'"
        if step is not None:
            msg += f" at step {step}"
        if self.available:
            msg += f". Available: {', '.join(self.available)}"
        super().__init__(msg)


class SiteOutOfRangeError(InputError):
    """Raised when a site index is outside 1..N."""

    def __init__(self, site: int, n_sites: int):
        self.site = site
        self.n_sites = n_sites
        super().__init__(f"Site {site} out of range 1..{n_sites}")


class DimensionCapError(InputError):
    """Raised when a requested Hilbert space exceeds the configured dimension cap."""

    def __init__(self, dim: int, cap: int):
        self.dim = dim
        self.cap = cap
        super().__init__(f"Dimension {dim} exceeds configured cap {cap} (REVERSIM_MAX_DIM)")


class EnumerationCapError(InputError):
    """Raised when exhaustive enumeration would visit too many trajectories."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"Enumeration of {count} trajectories exceeds cap {cap} (REVERSIM_ENUM_CAP)"
        )


class ScenarioError(InputError):
    """Raised when a scenario file fails to parse or validate."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(f"{prefix}{message}")


class RowSumOverflowError(InputError):
    """Raised when a potential form induces off-diagonal row sums above one."""

    def __init__(self, row: int, row_sum: float):
        self.row = row
        self.row_sum = row_sum
        self.factor = 1.0 / row_sum
        super().__init__(
            f"Off-diagonal mass {row_sum:.6g} > 1 in row {row}; "
            f"rescale Phi by a factor <= {self.factor:.6g}"
        )


class NotStochasticError(InputError):
    """Raised when a transition matrix has negative entries or rows not summing to one."""

    def __init__(self, deviation: float, row: int | None = None):
        self.deviation = deviation
        self.row = row
        msg = f"Transition matrix is not row-stochastic (deviation {deviation:.3e}"
        msg += f" in row {row})" if row is not None else ")"
        super().__init__(msg)


class ReducibleChainError(InputError):
    """Raised when a chain has more than one communicating class."""

    def __init__(self, classes: list[list[Any]]):
        self.classes = classes
        rendered = " | ".join("{" + ", ".join(str(s) for s in c) + "}" for c in classes)
        super().__init__(f"Chain is reducible; communicating classes: {rendered}")


class ZeroStationaryMassError(InputError):
    """Raised when reversal needs rho(y) > 0 but some state has zero mass."""

    def __init__(self, states: list[Any]):
        self.states = states
        super().__init__(f"Stationary distribution vanishes on: {', '.join(map(str, states))}")


class NotAPermutationError(InputError):
    """Raised when a map on a finite state set is not a bijection."""

    def __init__(self, what: str, detail: str = ""):
        self.what = what
        msg = f"{what} is not a bijection"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotAnInvolutionError(InputError):
    """Raised when pi o pi differs from the identity."""

    def __init__(self, witness: Any, deviation: float | None = None):
        self.witness = witness
        self.deviation = deviation
        msg = f"Map is not an involution (witness {witness}"
        msg += f", deviation {deviation:.3e})" if deviation is not None else ")"
        super().__init__(msg)


class EmptyMacrostateError(InputError):
    """Raised when a conditional probability is requested on an empty macrostate."""

    def __init__(self, name: str = "A"):
        self.name = name
        super().__init__(f"Macrostate {name} is empty")


class StateOutOfRangeError(InputError):
    """Raised when a macrostate names a state outside 0..n-1."""

    def __init__(self, name: str, state: int, n_states: int):
        self.name = name
        self.state = state
        self.n_states = n_states
        super().__init__(f"Macrostate {name} contains state {state}, outside 0..{n_states - 1}")


# =============================================================================
# Check errors
# =============================================================================


class PiNotCovariantError(CheckError):
    """Raised when pi P pi matches no projector of the observable."""

    def __init__(self, label: str, deviation: float):
        self.label = label
        self.deviation = deviation
        super().__init__(
            f"Observable is not closed under the involution: pi P pi for condition '{label}' "
            f"matches no projector (closest deviation {deviation:.3e})"
        )


class PreconditionViolated(CheckError):
    """Raised when a hypothesis of the reversal theorem does not hold."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        msg = f"Precondition violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class EndpointsUnreachableError(CheckError):
    """Raised when an ABL conditional is requested for endpoints of probability zero."""

    def __init__(self, alpha_0: str, alpha_t: str):
        self.alpha_0 = alpha_0
        self.alpha_t = alpha_t
        super().__init__(f"Endpoint pair ({alpha_0}, {alpha_t}) has probability zero")


class ProbabilityRangeError(CheckError):
    """Raised when a computed probability leaves [0, 1] by more than the clamping slack."""

    def __init__(self, value: float):
        self.value = value
        super().__init__(f"Probability {value!r} outside [0, 1] beyond clamping tolerance")


class ZeroProbabilityStepError(CheckError):
    """Raised when every outcome of a sampled step has probability zero."""

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"All outcome probabilities vanish at step {step}")
