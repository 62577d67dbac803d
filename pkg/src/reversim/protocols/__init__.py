"""Protocol definitions for reversim.

Usage:
    from reversim.protocols import Involution, Observable
"""

from .reversal import Involution, Label, Observable

__all__ = [
    "Involution",
    "Label",
    "Observable",
]
