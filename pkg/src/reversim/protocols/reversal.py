"""Reversal protocol definitions.

Protocols shared by the quantum, Markov and discrete subsystems:
- Involution: a map that squares to the identity (kinematical time-reversal)
- Observable: a decomposition of a state space into labelled conditions

These protocols define the interfaces the implementation classes satisfy.
Use them for type hints to allow alternative implementations.
"""

from __future__ import annotations

from typing import Any, Iterator, Protocol, runtime_checkable


# ═══════════════════════════════════════════════════════════════════════════════
# Basic Types
# ═══════════════════════════════════════════════════════════════════════════════

# Conditions are identified by canonical strings
Label = str


@runtime_checkable
class Involution(Protocol):
    """Protocol for kinematical time-reversal maps.

    An involution acts on the points of a state space (vectors in the
    quantum case, state indices in the discrete case) and satisfies
    apply(apply(x)) == x.
    """

    @property
    def dim(self) -> int:
        """Size of the space the involution acts on."""
        ...

    def apply(self, x: Any) -> Any:
        """Map one point of the state space to its time-reversed counterpart."""
        ...


@runtime_checkable
class Observable(Protocol):
    """Protocol for a measured quantity split into conditions.

    Each condition has a label, a dimension (the size of its eigenspace
    or macrostate) and supports membership lookups by label.
    """

    @property
    def dim(self) -> int:
        """Dimension of the whole state space."""
        ...

    @property
    def labels(self) -> list[Label]:
        """Condition labels, in canonical order."""
        ...

    def dimension_of(self, label: Label) -> int:
        """Dimension d_alpha of one condition."""
        ...

    def __iter__(self) -> Iterator[Any]:
        """Iterate over conditions."""
        ...
