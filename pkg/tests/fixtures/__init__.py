"""Test fixtures as Python module attributes.

Seeded Hamiltonians and measurement schedules shared by the unit and
integration tests, plus raw scenario dicts for the loader and runners.
"""

from .schedules import (
    MARKOV_2STATE,
    THREE_CYCLE,
    mz_schedule,
    scenario_dict,
    seeded_real_hamiltonian,
    spin_z,
)

__all__ = [
    "MARKOV_2STATE",
    "THREE_CYCLE",
    "mz_schedule",
    "scenario_dict",
    "seeded_real_hamiltonian",
    "spin_z",
]
