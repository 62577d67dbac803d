"""Reversim: time-reversal, detailed balance and entropy for finite quantum and classical systems.

Subpackages:
    quantum   - Hilbert-space primitives, observables, measurement schedules and the engine
    markov    - Stationary Markov chains, Bayes reversal, detailed balance
    dynamics  - Finite permutation dynamics with exact reversibility checks
    scenario  - JSON scenarios, runners and reports behind the revsim CLI
"""

__version__ = "0.1.0"
