"""Schema: pydantic models for scenario files.

A scenario is a JSON object with a "kind" discriminator. Quantum kinds
share one setup block (sites, Hamiltonian, observables, times, state,
involution); the Markov and dynamical-system kinds carry their own data.
Complex numbers are written as [re, im] pairs or plain reals.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

ComplexNumber = Union[float, tuple[float, float]]
ComplexMatrix = list[list[ComplexNumber]]


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# =============================================================================
# Hamiltonians
# =============================================================================


class ZeroHamiltonian(_Spec):
    type: Literal["zero"] = "zero"


class SpinFlipHamiltonian(_Spec):
    """omega (1 - sigma_x) / 2 on a single spin."""

    type: Literal["spin-flip"]
    omega: float = 1.0


class RandomRealHamiltonian(_Spec):
    """Seeded real symmetric H; commutes with complex conjugation.

    A missing seed falls back to the run seed.
    """

    type: Literal["random-real"]
    seed: int | None = None
    scale: float = 1.0


class RandomHamiltonian(_Spec):
    type: Literal["random"]
    seed: int | None = None
    scale: float = 1.0


class MatrixHamiltonian(_Spec):
    type: Literal["matrix"]
    entries: ComplexMatrix


class Term(_Spec):
    coef: float
    op: str


class ExprHamiltonian(_Spec):
    """Real linear combination of named operators, e.g. {"coef": 0.5, "op": "sx:1"}."""

    type: Literal["expr"]
    terms: list[Term] = Field(min_length=1)


HamiltonianSpec = Annotated[
    Union[
        ZeroHamiltonian,
        SpinFlipHamiltonian,
        RandomRealHamiltonian,
        RandomHamiltonian,
        MatrixHamiltonian,
        ExprHamiltonian,
    ],
    Field(discriminator="type"),
]


# =============================================================================
# Observables, involutions, states
# =============================================================================


class MatrixSpec(_Spec):
    matrix: ComplexMatrix


ObservableSpec = Union[str, MatrixSpec]
PiSpec = Union[Literal["conjugation", "spin-flip", "sx"], MatrixSpec]


class BasisState(_Spec):
    """Computational basis state, by index or by a string such as "ud" or "↑↓"."""

    basis: Union[int, str]


class AmplitudeState(_Spec):
    amplitudes: list[ComplexNumber] = Field(min_length=1)


StateSpec = Union[Literal["mixed"], BasisState, AmplitudeState]


# =============================================================================
# Scenarios
# =============================================================================


class ScenarioBase(_Spec):
    name: str
    description: str = ""
    reference: str = ""
    tol: float | None = Field(default=None, gt=0)
    seed: int | None = None


class QuantumSetup(ScenarioBase):
    """Shared schedule description for the quantum kinds.

    Times come from `times` when given, otherwise t0 + k dt for k < steps.
    A single `observable` is repeated at every time unless `observables`
    lists one per time.
    """

    n_sites: int = Field(default=1, ge=1)
    hamiltonian: HamiltonianSpec = Field(default_factory=ZeroHamiltonian)
    observable: ObservableSpec = "mz"
    observables: list[ObservableSpec] | None = None
    times: list[float] | None = None
    steps: int = Field(default=3, ge=1)
    dt: float = Field(default=1.0, gt=0)
    t0: float = 0.0
    preparation_time: float | None = None
    initial_state: StateSpec = "mixed"
    pi: PiSpec = "conjugation"
    workers: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_counts(self) -> QuantumSetup:
        if self.times is not None and self.observables is not None:
            if len(self.times) != len(self.observables):
                raise ValueError(
                    f"{len(self.observables)} observables for {len(self.times)} times"
                )
        return self

    @property
    def n_times(self) -> int:
        if self.times is not None:
            return len(self.times)
        if self.observables is not None:
            return len(self.observables)
        return self.steps


class ReversalScenario(QuantumSetup):
    """Prob[omega] against Prob[Theta omega] for every trajectory."""

    kind: Literal["reversal"]
    detailed_balance: bool = True
    ratio_tol: float = Field(default=1e-8, gt=0)
    expect_probability: float | None = None
    chain_step: int | None = Field(default=None, ge=0)


class DistributionScenario(QuantumSetup):
    """Full trajectory distribution and its marginals."""

    kind: Literal["distribution"]
    check_stationary: bool = False


class SampleScenario(QuantumSetup):
    """Collapse sampler against the exact distribution."""

    kind: Literal["sample"]
    samples: int | None = Field(default=None, ge=1)
    max_tv: float = Field(default=0.02, gt=0)


class AblScenario(QuantumSetup):
    """Conditionals on both endpoints."""

    kind: Literal["abl"]
    alpha_0: str | None = None
    alpha_t: str | None = None
    intermediate: list[str] | None = None
    expect: float | None = None
    check_symmetry: bool = False

    @model_validator(mode="after")
    def _check_endpoints(self) -> AblScenario:
        if (self.alpha_0 is None) != (self.alpha_t is None):
            raise ValueError("alpha_0 and alpha_t must be given together")
        if self.intermediate is not None and self.alpha_0 is None:
            raise ValueError("intermediate outcomes need both endpoints")
        return self


class RetrodictScenario(ScenarioBase):
    """Two-spin retrodiction, optionally with the single-spin checks."""

    kind: Literal["retrodict"]
    coefficients: list[ComplexNumber] = Field(
        default_factory=lambda: [0.5, 0.5, 0.5, 0.5], min_length=4, max_length=4
    )
    expect_forward: float | None = None
    expect_reversed: float | None = None
    single_spin_axes: list[Literal["x", "z"]] = Field(default_factory=list)


class EntropyFlowScenario(ScenarioBase):
    """Entropy increments from m = +1 under seeded reversal-symmetric Hamiltonians."""

    kind: Literal["entropy-flow"]
    n_sites: int = Field(default=6, ge=1)
    seeds: int = Field(default=50, ge=1)
    steps: int = Field(default=1, ge=1)
    samples_per_seed: int = Field(default=1, ge=1)
    dt: float = Field(default=1.0, gt=0)
    scale: float = Field(default=1.0, gt=0)


class PotentialSpec(_Spec):
    phi: list[list[float]]
    v: list[float]


class MarkovScenario(ScenarioBase):
    """A chain given by p or by a potential form (Phi, V)."""

    kind: Literal["markov"]
    states: list[str] | None = None
    p: list[list[float]] | None = None
    potential: PotentialSpec | None = None
    involution: dict[str, str] | None = None
    expect_reversible: bool = True
    expect_stationary: list[float] | None = None
    path_length: int = Field(default=3, ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> MarkovScenario:
        if (self.p is None) == (self.potential is None):
            raise ValueError("give exactly one of p or potential")
        return self


class PermutationTables(_Spec):
    f: list[int]
    pi: list[int]


class DynsysScenario(ScenarioBase):
    """Mechanical reversibility and the exact macrostate detailed-balance identity.

    `system` is a built-in name such as "free-motion:8" or explicit tables.
    """

    kind: Literal["dynsys"]
    system: Union[str, PermutationTables] = "free-motion:8"
    max_t: int = Field(default=16, ge=1)
    t: int = Field(default=1, ge=1)
    pairs: int = Field(default=20, ge=0)
    expect_reversible: bool = True


Scenario = Annotated[
    Union[
        ReversalScenario,
        DistributionScenario,
        SampleScenario,
        AblScenario,
        RetrodictScenario,
        EntropyFlowScenario,
        MarkovScenario,
        DynsysScenario,
    ],
    Field(discriminator="kind"),
]

SCENARIO_ADAPTER: TypeAdapter[Scenario] = TypeAdapter(Scenario)

KINDS = (
    "reversal",
    "distribution",
    "sample",
    "abl",
    "retrodict",
    "entropy-flow",
    "markov",
    "dynsys",
)
