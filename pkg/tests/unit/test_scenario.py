"""Tests for scenario files: schema, loading, building, running and reports.

Tests cover:
- parse_scenario / load_scenario errors with field and line
- Building Hamiltonians, observables, states and involutions
- run_scenario for each kind on small inputs
- Option precedence: command line, then scenario, then config
- CSV and JSON report writers
"""

import csv
import json
import math
from fractions import Fraction

import numpy as np
import pytest

from tests.fixtures import scenario_dict
from reversim.errors import PreconditionViolated, ScenarioError
from reversim.scenario import (
    KINDS,
    Report,
    RunOptions,
    file_stem,
    format_value,
    list_scenarios,
    load_scenario,
    parse_scenario,
    resolve_scenario,
    run_scenario,
    write_report,
)
from reversim.scenario.build import basis_index, build_hamiltonian, named_operator
from reversim.scenario.schema import RandomRealHamiltonian


def parse(data: dict) -> object:
    return parse_scenario(json.dumps(data, indent=2))


# =============================================================================
# Loading
# =============================================================================


class TestParseScenario:
    """Tests for parse_scenario and load_scenario."""

    def test_minimal_reversal(self):
        sc = parse(scenario_dict("reversal"))
        assert sc.kind == "reversal"
        assert sc.n_sites == 1
        assert sc.observable == "mz"
        assert sc.n_times == 3

    def test_invalid_json_reports_line(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario('{\n  "kind": "markov",\n  "name": \n}')
        assert exc.value.line == 4

    def test_missing_kind(self):
        with pytest.raises(ScenarioError) as exc:
            parse_scenario('{"name": "x"}')
        assert exc.value.field == "kind"
        assert exc.value.line == 1

    def test_top_level_must_be_object(self):
        with pytest.raises(ScenarioError):
            parse_scenario("[1, 2]")

    def test_bad_field_reports_path_and_line(self):
        text = json.dumps(scenario_dict("reversal", steps=0), indent=2)
        with pytest.raises(ScenarioError) as exc:
            parse_scenario(text)
        assert exc.value.field == "steps"
        assert exc.value.line == text.splitlines().index('  "steps": 0') + 1

    def test_unknown_field_rejected(self):
        with pytest.raises(ScenarioError) as exc:
            parse(scenario_dict("markov", bogus=1))
        assert exc.value.field == "bogus"

    def test_markov_needs_one_source(self):
        with pytest.raises(ScenarioError):
            parse(scenario_dict("markov", potential={"phi": [[0.0]], "v": [0.0]}))

    def test_abl_endpoints_together(self):
        with pytest.raises(ScenarioError):
            parse(scenario_dict("abl", alpha_0="1"))

    def test_times_and_observables_must_agree(self):
        with pytest.raises(ScenarioError):
            parse(scenario_dict("distribution", times=[0.0, 1.0], observables=["mz"]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "nope.json")

    def test_every_kind_parses(self):
        for kind in KINDS:
            assert parse(scenario_dict(kind)).kind == kind


class TestCatalog:
    """Tests for the bundled scenarios."""

    def test_required_names_present(self):
        names = {e.name for e in list_scenarios()}
        assert {
            "spin-bernoulli",
            "mz-reversal-n3",
            "abl-trivial",
            "two-spin-retro",
            "markov-2state",
            "freemotion-db",
            "entropy-flow-n6",
        } <= names

    def test_every_entry_has_reference(self):
        for entry in list_scenarios():
            assert entry.reference.startswith("Sec. ")

    def test_resolve_by_name_and_path(self):
        bundled = resolve_scenario("markov-2state")
        assert bundled.name == "markov-2state.json"
        assert resolve_scenario(str(bundled)) == bundled

    def test_resolve_unknown_lists_names(self):
        with pytest.raises(ScenarioError) as exc:
            resolve_scenario("no-such-scenario")
        assert "markov-2state" in str(exc.value)


# =============================================================================
# Building
# =============================================================================


class TestBuild:
    """Tests for turning specs into engine objects."""

    @pytest.mark.parametrize("text,index", [("uu", 0), ("ud", 1), ("du", 2), ("↓↓", 3), ("+-", 1)])
    def test_basis_index(self, text, index):
        assert basis_index(text, 2) == index

    def test_basis_wrong_length(self):
        with pytest.raises(ScenarioError):
            basis_index("udu", 2)

    def test_named_operators(self):
        assert np.allclose(named_operator("sum", 2).entries.diagonal(), [2, 0, 0, -2])
        assert np.allclose(named_operator("diff", 2).entries.diagonal(), [0, 2, -2, 0])
        with pytest.raises(ScenarioError):
            named_operator("sum", 1)
        with pytest.raises(ScenarioError):
            named_operator("sq:1", 1)

    def test_random_hamiltonian_uses_run_seed(self):
        spec = RandomRealHamiltonian(type="random-real")
        a = build_hamiltonian(spec, 2, seed=3)
        b = build_hamiltonian(spec, 2, seed=3)
        c = build_hamiltonian(spec, 2, seed=4)
        assert np.array_equal(a.entries, b.entries)
        assert not np.array_equal(a.entries, c.entries)
        assert a.is_real()


# =============================================================================
# Running
# =============================================================================


class TestRunScenario:
    """run_scenario on small inputs of every kind."""

    def test_reversal(self):
        sc = parse(
            scenario_dict(
                "reversal",
                n_sites=2,
                hamiltonian={"type": "random-real", "seed": 1},
                chain_step=0,
                tol=1e-10,
            )
        )
        report = run_scenario(sc)
        assert report.passed
        assert [c.name for c in report.checks] == [
            "time_reversal",
            "dimension_ratio",
            "measurement_chain_balance",
        ]
        assert report.tables[0].columns[0] == "trajectory"
        assert len(report.tables[0].rows) == 27

    def test_reversal_hypothesis_failure_raises(self):
        sc = parse(scenario_dict("reversal", n_sites=2, hamiltonian={"type": "random", "seed": 1}))
        with pytest.raises(PreconditionViolated):
            run_scenario(sc)

    def test_distribution(self):
        sc = parse(scenario_dict("distribution", n_sites=2, check_stationary=True, tol=1e-10))
        report = run_scenario(sc)
        assert report.passed
        assert report.table("marginals") is not None

    def test_sample(self):
        sc = parse(scenario_dict("sample", n_sites=2, hamiltonian={"type": "random-real"}, max_tv=0.05))
        report = run_scenario(sc, RunOptions(seed=3, samples=20_000))
        assert report.values["samples"] == 20_000
        assert report.passed

    def test_abl_expectation(self):
        sc = parse(
            scenario_dict(
                "abl",
                observable="sz:1",
                alpha_0="1",
                alpha_t="1",
                intermediate=["1"],
                expect=1.0,
                tol=1e-12,
            )
        )
        report = run_scenario(sc)
        assert report.passed
        assert report.values["conditional"] == pytest.approx(1.0)

    def test_abl_unknown_intermediate(self):
        sc = parse(
            scenario_dict("abl", observable="sz:1", alpha_0="1", alpha_t="1", intermediate=["7"], expect=1.0)
        )
        with pytest.raises(ScenarioError):
            run_scenario(sc)

    def test_retrodict(self):
        sc = parse(scenario_dict("retrodict", expect_forward=0.5, expect_reversed=1.0, tol=1e-12))
        report = run_scenario(sc)
        assert report.passed
        assert "ratio_matches_dimensions" in [c.name for c in report.checks]

    def test_retrodict_wrong_expectation_fails(self):
        sc = parse(scenario_dict("retrodict", expect_forward=0.4, tol=1e-12))
        report = run_scenario(sc)
        assert not report.passed
        assert report.failures[0].name == "forward"
        assert report.failures[0].witness == "expected 0.4"

    def test_entropy_flow(self):
        sc = parse(scenario_dict("entropy-flow", n_sites=4, seeds=10))
        report = run_scenario(sc)
        assert set(report.traces) == {"median", "q1", "q3", "mean"}
        assert len(report.tables[0].rows) == 10

    def test_markov_reversible(self):
        report = run_scenario(parse(scenario_dict("markov", tol=1e-12)))
        assert report.passed
        stationary = report.table("stationary")
        assert stationary.rows[0][1] == pytest.approx(2 / 3)

    def test_markov_cycle_expected_irreversible(self):
        sc = parse(
            scenario_dict(
                "markov",
                states=["a", "b", "c"],
                p=[[0, 1, 0], [0, 0, 1], [1, 0, 0]],
                expect_reversible=False,
            )
        )
        report = run_scenario(sc)
        assert report.passed
        assert "reversed_equals_original" not in [c.name for c in report.checks]

    def test_markov_cycle_claimed_reversible_fails(self):
        sc = parse(scenario_dict("markov", states=["a", "b", "c"], p=[[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
        report = run_scenario(sc)
        failed = {c.name: c for c in report.failures}
        assert "detailed_balance" in failed
        assert failed["detailed_balance"].witness

    def test_dynsys_free_motion(self):
        report = run_scenario(parse(scenario_dict("dynsys", system="free-motion:4", max_t=8, pairs=5)))
        assert report.passed
        assert report.checks[0].value == 8

    def test_dynsys_unknown_system(self):
        with pytest.raises(ScenarioError) as exc:
            run_scenario(parse(scenario_dict("dynsys", system="billiard:3")))
        assert exc.value.field == "system"

    def test_dynsys_tables_irreversible(self):
        sc = parse(
            scenario_dict(
                "dynsys",
                system={"f": [1, 2, 0], "pi": [0, 1, 2]},
                max_t=2,
                pairs=0,
                expect_reversible=False,
            )
        )
        report = run_scenario(sc)
        assert report.passed
        assert report.checks[0].value == 0


class TestOptionPrecedence:
    """Command line beats scenario, scenario beats config."""

    def test_cli_tol_overrides_scenario(self):
        sc = parse(scenario_dict("retrodict", expect_forward=0.4, tol=1e-12))
        assert run_scenario(sc, RunOptions(tol=0.2)).passed

    def test_config_tol_used_when_unset(self):
        sc = parse(scenario_dict("retrodict", expect_forward=0.5))
        check = run_scenario(sc).checks[0]
        assert check.tol == 1e-10

    def test_seed_changes_random_hamiltonian(self):
        base = scenario_dict("distribution", n_sites=2, hamiltonian={"type": "random-real"})
        a = run_scenario(parse(base), RunOptions(seed=1)).tables[0].rows
        b = run_scenario(parse(base), RunOptions(seed=2)).tables[0].rows
        assert a != b


# =============================================================================
# Reports
# =============================================================================


class TestReportWriters:
    """Tests for format_value, write_csv and write_json."""

    def test_format_value(self):
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(True) == "true"
        assert format_value(None) == ""
        assert format_value(float("nan")) == "nan"
        assert format_value(Fraction(2, 3)) == "2/3"

    def test_csv_files(self, tmp_path):
        report = run_scenario(parse(scenario_dict("markov", tol=1e-12)))
        written = write_report(report, tmp_path, "csv")
        names = [p.name for p in written]
        assert names == ["test-markov.csv", "test-markov_stationary.csv", "test-markov_checks.csv"]
        with open(tmp_path / "test-markov.csv", newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["from", "to", "p", "reversed_p", "balance_violation"]
        assert rows[1][:3] == ["a", "a", "0.90000000000000002"]

    def test_traces_csv(self, tmp_path):
        report = Report(name="r", kind="entropy-flow", traces={"median": [0.0, 1.5], "mean": [0.0]})
        write_report(report, tmp_path)
        lines = (tmp_path / "r_traces.csv").read_text().splitlines()
        assert lines == ["step,median,mean", "0,0,0", "1,1.5,"]

    def test_json(self, tmp_path):
        report = run_scenario(parse(scenario_dict("retrodict", expect_forward=0.5, tol=1e-12)))
        [path] = write_report(report, tmp_path, "json")
        data = json.loads(path.read_text())
        assert data["passed"] is True
        assert list(data) == sorted(data)
        assert data["tables"]["retrodiction"]["columns"] == ["quantity", "value"]

    def test_json_non_finite_is_null(self, tmp_path):
        report = Report(name="n", kind="reversal", values={"ratio": math.nan})
        [path] = write_report(report, tmp_path, "json")
        assert json.loads(path.read_text())["values"]["ratio"] is None

    def test_identical_runs_identical_bytes(self, tmp_path):
        sc = parse(scenario_dict("reversal", n_sites=2, hamiltonian={"type": "random-real", "seed": 2}))
        first = write_report(run_scenario(sc), tmp_path / "a")
        second = write_report(run_scenario(sc), tmp_path / "b")
        for p, q in zip(first, second):
            assert p.read_bytes() == q.read_bytes()

    @pytest.mark.parametrize(
        "name,stem",
        [("markov-2state", "markov-2state"), ("../../etc/x", "etc_x"), ("a/b", "a_b"), ("..", "report")],
    )
    def test_file_stem(self, name, stem):
        assert file_stem(name) == stem

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_names_cannot_escape_out_dir(self, tmp_path, fmt):
        out = tmp_path / "out"
        report = Report(name="../escaped", kind="markov", values={"x": 1.0})
        written = write_report(report, out, fmt)
        assert written
        for p in written:
            assert p.parent == out
        assert not list(tmp_path.glob("escaped*"))
