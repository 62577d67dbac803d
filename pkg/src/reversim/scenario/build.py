"""Build: turn validated scenario specs into engine objects."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import ScenarioError
from ..quantum.hilbert import AntiunitaryInvolution, HermitianOperator, StateVector, random_hermitian
from ..quantum.models import spin_flip_hamiltonian
from ..quantum.observables import (
    ObservableDecomposition,
    build_magnetization,
    build_site_operator,
    decompose_observable,
    spin_involution,
)
from ..quantum.schedule import MeasurementSchedule
from .schema import (
    AmplitudeState,
    BasisState,
    ComplexNumber,
    ExprHamiltonian,
    HamiltonianSpec,
    MatrixHamiltonian,
    MatrixSpec,
    ObservableSpec,
    PiSpec,
    QuantumSetup,
    RandomHamiltonian,
    RandomRealHamiltonian,
    SpinFlipHamiltonian,
    StateSpec,
)

UP_CHARS = frozenset("u↑0+")
DOWN_CHARS = frozenset("d↓1-")


def to_complex(x: ComplexNumber) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    re, im = x
    return complex(re, im)


def complex_matrix(entries: Sequence[Sequence[ComplexNumber]]) -> np.ndarray:
    return np.array([[to_complex(x) for x in row] for row in entries], dtype=complex)


def named_operator(name: str, n_sites: int, field: str = "observable") -> HermitianOperator:
    """Operators by name: mz, sx:i, sy:i, sz:i, sum, diff, id."""
    if name == "mz":
        return build_magnetization(n_sites)
    if name == "id":
        return HermitianOperator.identity(2**n_sites)
    if name in ("sum", "diff"):
        if n_sites < 2:
            raise ScenarioError(f"'{name}' needs at least two sites", field=field)
        z1 = build_site_operator(n_sites, 1, "z")
        z2 = build_site_operator(n_sites, 2, "z")
        return z1 + z2 if name == "sum" else z1 - z2
    axis, sep, site = name.partition(":")
    if sep and axis in ("sx", "sy", "sz") and site.isdigit():
        return build_site_operator(n_sites, int(site), axis[1])  # type: ignore[arg-type]
    raise ScenarioError(f"unknown operator '{name}'", field=field)


def build_hamiltonian(spec: HamiltonianSpec, n_sites: int, seed: int) -> HermitianOperator:
    dim = 2**n_sites
    if isinstance(spec, SpinFlipHamiltonian):
        if n_sites != 1:
            raise ScenarioError("spin-flip Hamiltonian acts on one site", field="hamiltonian.type")
        return spin_flip_hamiltonian(spec.omega)
    if isinstance(spec, (RandomRealHamiltonian, RandomHamiltonian)):
        rng = np.random.default_rng(seed if spec.seed is None else spec.seed)
        real = isinstance(spec, RandomRealHamiltonian)
        return random_hermitian(dim, rng, real=real, scale=spec.scale)
    if isinstance(spec, MatrixHamiltonian):
        return HermitianOperator(complex_matrix(spec.entries))
    if isinstance(spec, ExprHamiltonian):
        total = HermitianOperator.zero(dim)
        for k, term in enumerate(spec.terms):
            total = total + term.coef * named_operator(term.op, n_sites, f"hamiltonian.terms.{k}.op")
        return total
    return HermitianOperator.zero(dim)


def build_observable(spec: ObservableSpec, n_sites: int, field: str = "observable") -> ObservableDecomposition:
    if isinstance(spec, MatrixSpec):
        return decompose_observable(HermitianOperator(complex_matrix(spec.matrix)))
    return decompose_observable(named_operator(spec, n_sites, field))


def build_involution(spec: PiSpec, n_sites: int, dim: int) -> AntiunitaryInvolution:
    if isinstance(spec, MatrixSpec):
        return AntiunitaryInvolution(complex_matrix(spec.matrix))
    if spec == "conjugation":
        return AntiunitaryInvolution.conjugation(dim)
    return spin_involution(n_sites, spec)


def basis_index(text: str, n_sites: int) -> int:
    """Index of a product state written site by site, site 1 first; down is bit 1."""
    if len(text) != n_sites:
        raise ScenarioError(f"basis '{text}' has {len(text)} sites, expected {n_sites}", field="initial_state.basis")
    index = 0
    for ch in text:
        if ch in UP_CHARS:
            bit = 0
        elif ch in DOWN_CHARS:
            bit = 1
        else:
            raise ScenarioError(f"unknown spin symbol '{ch}'", field="initial_state.basis")
        index = (index << 1) | bit
    return index


def build_state(spec: StateSpec, n_sites: int, dim: int) -> StateVector | None:
    """None means the maximally mixed state."""
    if isinstance(spec, BasisState):
        index = spec.basis if isinstance(spec.basis, int) else basis_index(spec.basis, n_sites)
        if not 0 <= index < dim:
            raise ScenarioError(f"basis index {index} outside 0..{dim - 1}", field="initial_state.basis")
        return StateVector.basis(dim, index)
    if isinstance(spec, AmplitudeState):
        return StateVector([to_complex(a) for a in spec.amplitudes])
    return None


def build_schedule(setup: QuantumSetup, seed: int) -> MeasurementSchedule:
    """The measurement schedule a quantum scenario describes."""
    h = build_hamiltonian(setup.hamiltonian, setup.n_sites, seed)
    n = setup.n_times
    times = setup.times or [setup.t0 + k * setup.dt for k in range(n)]
    if setup.observables is not None:
        obs = [build_observable(o, setup.n_sites, f"observables.{k}") for k, o in enumerate(setup.observables)]
    else:
        obs = [build_observable(setup.observable, setup.n_sites)] * n
    state = build_state(setup.initial_state, setup.n_sites, h.dim)
    return MeasurementSchedule(times, obs, h, state, setup.preparation_time)
