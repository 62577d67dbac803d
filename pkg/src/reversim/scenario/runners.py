"""Runners: one function per scenario kind, each returning a Report.

Numeric deviations beyond tolerance become failed checks. Hypothesis
failures (CheckError) and bad input (InputError) propagate to the caller.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import config
from ..dynamics.system import (
    FiniteDynamicalSystem,
    check_detailed_balance_identity,
    check_mechanical_reversibility,
    free_motion,
    permutation_system,
    random_macrostate,
)
from ..errors import ScenarioError
from ..markov.chain import (
    MarkovChain,
    PotentialForm,
    balance_violations,
    gibbs_chain,
    is_detailed_balance,
    path_reversal_deviation,
    reverse_chain,
)
from ..quantum.engine import (
    ZERO_PROBABILITY,
    abl_distribution,
    detailed_balance_table,
    endpoint_weight,
    enumerate_distribution,
    marginals,
    measurement_chain,
    verify_abl_symmetry,
    verify_time_reversal,
)
from ..quantum.entropy import entropy_flow_demo
from ..quantum.retrodiction import single_spin_retrodiction, two_spin_retrodiction
from ..quantum.sampler import empirical_distribution, sample_trajectories, total_variation
from ..quantum.schedule import TRAJECTORY_SEPARATOR
from .build import build_involution, build_schedule, to_complex
from .report import Report, Table
from .schema import (
    AblScenario,
    DistributionScenario,
    DynsysScenario,
    EntropyFlowScenario,
    MarkovScenario,
    PermutationTables,
    QuantumSetup,
    RetrodictScenario,
    ReversalScenario,
    SampleScenario,
    Scenario,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunOptions:
    """Command-line overrides; None defers to the scenario, then to config."""

    seed: int | None = None
    samples: int | None = None
    tol: float | None = None
    workers: int | None = None


@dataclass(frozen=True)
class _Resolved:
    seed: int
    tol: float
    workers: int


def _resolve(sc: Scenario, opts: RunOptions) -> _Resolved:
    cfg = config.get_config()
    seed = opts.seed if opts.seed is not None else (sc.seed if sc.seed is not None else 0)
    tol = opts.tol if opts.tol is not None else (sc.tol if sc.tol is not None else cfg["tol"])
    workers = opts.workers or getattr(sc, "workers", None) or cfg["workers"]
    return _Resolved(seed=seed, tol=float(tol), workers=int(workers))


def _new_report(sc: Scenario) -> Report:
    return Report(name=sc.name, kind=sc.kind, reference=sc.reference)


def _setup(sc: QuantumSetup, r: _Resolved):
    s = build_schedule(sc, r.seed)
    return s, build_involution(sc.pi, sc.n_sites, s.dim)


# =============================================================================
# Quantum kinds
# =============================================================================


def run_reversal(sc: ReversalScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    s, pi = _setup(sc, r)
    report = _new_report(sc)

    result = verify_time_reversal(s, pi, r.workers)
    report.tables.append(
        Table(
            "trajectories",
            ["trajectory", "probability", "reversed_probability", "deviation"],
            [[str(row.omega), row.probability, row.reversed_probability, row.deviation] for row in result.rows],
        )
    )
    report.values["n_trajectories"] = len(result.rows)
    report.check_at_most("time_reversal", result.max_deviation, r.tol, str(result.witness))

    if sc.expect_probability is not None:
        worst = max(result.rows, key=lambda row: abs(row.probability - sc.expect_probability))
        report.check_at_most(
            "uniform_probability",
            abs(worst.probability - sc.expect_probability),
            r.tol,
            str(worst.omega),
        )

    if sc.detailed_balance:
        ratios = detailed_balance_table(s, pi)
        defined = [x for x in ratios if x.defined]
        report.tables.append(
            Table(
                "detailed_balance",
                ["trajectory", "ratio", "predicted", "deviation", "defined"],
                [[str(x.omega), x.ratio, x.predicted, x.deviation, x.defined] for x in ratios],
            )
        )
        report.values["undefined_ratios"] = len(ratios) - len(defined)
        if len(defined) < len(ratios):
            logger.warning("%s: skipped %d zero-probability ratios", sc.name, len(ratios) - len(defined))
        if defined:
            worst_ratio = max(defined, key=lambda x: x.deviation)
            report.check_at_most("dimension_ratio", worst_ratio.deviation, sc.ratio_tol, str(worst_ratio.omega))

    if sc.chain_step is not None:
        chain = measurement_chain(s, sc.chain_step).with_stationary()
        db = is_detailed_balance(chain, r.tol)
        report.tables.append(
            Table(
                "measurement_chain",
                ["from", "to", "p"],
                [[a, b, float(chain.p[i, j])] for i, a in enumerate(chain.states) for j, b in enumerate(chain.states)],
            )
        )
        report.check_at_most("measurement_chain_balance", db.max_violation, r.tol, str(db.witness))
    return report


def run_distribution(sc: DistributionScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    s = build_schedule(sc, r.seed)
    report = _new_report(sc)
    dist = enumerate_distribution(s, r.workers)
    report.tables.append(
        Table("trajectories", ["trajectory", "probability"], [[str(w), p] for w, p in dist.items()])
    )
    report.check_at_most("normalization", abs(dist.total() - 1.0), r.tol)

    rows, worst, witness = [], 0.0, ""
    for k, (marginal, obs) in enumerate(zip(marginals(s), s.observables)):
        for label, p in marginal.items():
            share = obs.dimension_of(label) / s.dim
            rows.append([k, label, p, share])
            if abs(p - share) > worst:
                worst, witness = abs(p - share), f"step {k}, {label}"
    report.tables.append(Table("marginals", ["step", "label", "probability", "dimension_share"], rows))
    if sc.check_stationary:
        report.check_at_most("stationary_marginals", worst, r.tol, witness)
    return report


def run_sample(sc: SampleScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    s = build_schedule(sc, r.seed)
    n = opts.samples or sc.samples or int(config.get_setting("samples"))
    report = _new_report(sc)
    exact = enumerate_distribution(s, r.workers)
    samples = sample_trajectories(s, n, r.seed, r.workers)
    empirical = empirical_distribution(samples)
    report.tables.append(
        Table(
            "trajectories",
            ["trajectory", "probability", "empirical"],
            [[str(w), p, empirical.get(w, 0.0)] for w, p in exact.items()],
        )
    )
    report.values["samples"] = n
    report.check_at_most("total_variation", total_variation(samples, exact), sc.max_tv)
    return report


def run_abl(sc: AblScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    s, pi = _setup(sc, r)
    report = _new_report(sc)

    if sc.alpha_0 is not None and sc.alpha_t is not None:
        pairs = [(sc.alpha_0, sc.alpha_t)]
    else:
        pairs = [
            (a0, at)
            for a0 in s.observables[0].labels
            for at in s.observables[-1].labels
            if endpoint_weight(s, a0, at) > ZERO_PROBABILITY
        ]

    rows, worst, witness = [], 0.0, ""
    for a0, at in pairs:
        dist = abl_distribution(s, a0, at)
        for combo, p in dist.items():
            rows.append([a0, TRAJECTORY_SEPARATOR.join(combo), at, p])
        dev = abs(sum(dist.values()) - 1.0)
        if dev >= worst:
            worst, witness = dev, f"{a0}..{at}"
        if sc.intermediate is not None and sc.expect is not None:
            key = tuple(sc.intermediate)
            if key not in dist:
                raise ScenarioError(f"no intermediate outcome {list(key)}", field="intermediate")
            value = dist[key]
            report.values["conditional"] = value
            report.check_close("abl_conditional", value, sc.expect, r.tol)
    report.tables.append(Table("conditionals", ["alpha_0", "intermediate", "alpha_t", "probability"], rows))
    report.check_at_most("conditionals_sum_to_one", worst, r.tol, witness)

    if sc.check_symmetry:
        report.check_at_most("abl_time_symmetry", verify_abl_symmetry(s, pi), r.tol)
    return report


def run_retrodict(sc: RetrodictScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    report = _new_report(sc)
    coefficients = [to_complex(c) for c in sc.coefficients]
    result = two_spin_retrodiction(coefficients)
    rows = [
        ["forward", result.forward],
        ["reversed", result.reversed],
        ["ratio", result.ratio],
        ["dimension_ratio", result.dimension_ratio],
    ]
    if sc.expect_forward is not None:
        report.check_close("forward", result.forward, sc.expect_forward, r.tol)
    if sc.expect_reversed is not None:
        report.check_close("reversed", result.reversed, sc.expect_reversed, r.tol)
    # The ratio reduces to the dimension ratio only for |c_ud| = |c_du|
    if abs(abs(coefficients[1]) ** 2 - abs(coefficients[2]) ** 2) <= r.tol:
        report.check_close("ratio_matches_dimensions", result.ratio, result.dimension_ratio, r.tol)
    for axis in sc.single_spin_axes:
        value = single_spin_retrodiction(axis)
        rows.append([f"single_spin_{axis}", value])
        report.check_close(f"single_spin_{axis}", value, 1.0, r.tol)
    report.tables.append(Table("retrodiction", ["quantity", "value"], rows))
    return report


def run_entropy_flow(sc: EntropyFlowScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    report = _new_report(sc)
    summary = entropy_flow_demo(
        sc.n_sites,
        sc.seeds,
        sc.steps,
        base_seed=r.seed,
        samples_per_seed=sc.samples_per_seed,
        dt=sc.dt,
        scale=sc.scale,
    )
    report.tables.append(
        Table(
            "increments",
            ["run", *[f"step_{k}" for k in range(summary.steps + 1)]],
            [[i, *map(float, row)] for i, row in enumerate(summary.increments)],
        )
    )
    report.traces = {
        "median": list(summary.median),
        "q1": list(summary.q1),
        "q3": list(summary.q3),
        "mean": list(summary.mean),
    }
    first = summary.median[1]
    report.add_check("median_entropy_increase", first, None, first > 0, "median increment not positive")
    return report


# =============================================================================
# Classical kinds
# =============================================================================


def _markov_chain(sc: MarkovScenario) -> MarkovChain:
    if sc.potential is not None:
        n = len(sc.potential.v)
        states = tuple(sc.states) if sc.states else tuple(f"s{k}" for k in range(n))
        return gibbs_chain(PotentialForm(np.array(sc.potential.phi), np.array(sc.potential.v), states))
    assert sc.p is not None
    states = sc.states or [f"s{k}" for k in range(len(sc.p))]
    return MarkovChain(states, sc.p).with_stationary()


def run_markov(sc: MarkovScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    report = _new_report(sc)
    chain = _markov_chain(sc)
    rho = chain.require_stationary()

    if sc.expect_stationary is not None:
        expected = np.array(sc.expect_stationary, dtype=float)
        if expected.shape != rho.shape:
            raise ScenarioError(f"expected {chain.n} stationary weights", field="expect_stationary")
        report.check_at_most("stationary", float(np.max(np.abs(rho - expected))), r.tol)

    db = is_detailed_balance(chain, r.tol)
    report.add_check(
        "detailed_balance",
        db.max_violation,
        r.tol,
        db.holds == sc.expect_reversible,
        f"holds={db.holds} at {db.witness}",
    )

    rev = reverse_chain(chain, sc.involution)
    twice = reverse_chain(rev, sc.involution)
    report.check_at_most("double_reversal", float(np.max(np.abs(twice.p - chain.p))), r.tol)
    if sc.expect_reversible:
        report.check_at_most("reversed_equals_original", float(np.max(np.abs(rev.p - chain.p))), r.tol)

    worst, path = path_reversal_deviation(chain, sc.path_length, sc.involution)
    report.add_check(
        "path_reversal",
        worst,
        r.tol,
        (worst <= r.tol) == sc.expect_reversible,
        TRAJECTORY_SEPARATOR.join(map(str, path or ())),
    )

    violations = balance_violations(chain)
    report.tables.append(
        Table(
            "transitions",
            ["from", "to", "p", "reversed_p", "balance_violation"],
            [
                [a, b, float(chain.p[i, j]), float(rev.p[i, j]), float(violations[i, j])]
                for i, a in enumerate(chain.states)
                for j, b in enumerate(chain.states)
            ],
        )
    )
    report.tables.append(
        Table("stationary", ["state", "probability"], [[s, float(p)] for s, p in zip(chain.states, rho)])
    )
    return report


def _dynamical_system(sc: DynsysScenario) -> FiniteDynamicalSystem:
    if isinstance(sc.system, PermutationTables):
        return permutation_system(sc.system.f, sc.system.pi)
    name, _, arg = sc.system.partition(":")
    if name == "free-motion" and arg.isdigit() and int(arg) > 0:
        return free_motion(int(arg))
    raise ScenarioError(f"unknown system '{sc.system}'", field="system")


def run_dynsys(sc: DynsysScenario, opts: RunOptions) -> Report:
    r = _resolve(sc, opts)
    report = _new_report(sc)
    system = _dynamical_system(sc)

    failures = []
    for t in range(1, sc.max_t + 1):
        result = check_mechanical_reversibility(system, t)
        if not result.holds:
            failures.append((t, result.witness))
    holds = not failures
    witness = f"t={failures[0][0]} x={system.label(failures[0][1])}" if failures else ""
    report.add_check(
        "mechanical_reversibility",
        sc.max_t - len(failures),
        None,
        holds == sc.expect_reversible,
        witness,
    )

    rng = np.random.default_rng(r.seed)
    rows, defined, equal = [], 0, 0
    first_bad = ""
    for k in range(sc.pairs):
        a = random_macrostate(system, rng, name="A")
        b = random_macrostate(system, rng, name="B")
        ident = check_detailed_balance_identity(system, a, b, sc.t)
        rows.append([k, a.size, b.size, ident.lhs, ident.rhs, ident.equal, ident.defined])
        if ident.defined:
            defined += 1
            equal += ident.equal
            if not ident.equal and not first_bad:
                first_bad = f"pair {k}: {ident.lhs} != {ident.rhs}"
    report.tables.append(Table("identity", ["pair", "size_a", "size_b", "lhs", "rhs", "equal", "defined"], rows))
    report.values["defined_pairs"] = defined
    if sc.expect_reversible:
        report.add_check("detailed_balance_identity", f"{equal}/{defined}", None, equal == defined, first_bad)
    return report


RUNNERS: dict[str, Callable[..., Report]] = {
    "reversal": run_reversal,
    "distribution": run_distribution,
    "sample": run_sample,
    "abl": run_abl,
    "retrodict": run_retrodict,
    "entropy-flow": run_entropy_flow,
    "markov": run_markov,
    "dynsys": run_dynsys,
}


def run_scenario(sc: Scenario, opts: RunOptions | None = None) -> Report:
    """Run one validated scenario."""
    opts = opts or RunOptions()
    logger.debug("Running scenario %s (%s)", sc.name, sc.kind)
    return RUNNERS[sc.kind](sc, opts)
