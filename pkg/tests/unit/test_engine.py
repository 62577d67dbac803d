"""Tests for the exact measurement engine.

Tests cover:
- Schedules and trajectories: validation, reversal, parsing
- trajectory_probability and enumerate_distribution
- The reversal theorem and its hypotheses
- Dimension ratios for detailed balance
- Conditioning on both endpoints
- Marginals and the two-time measurement chain
- Seeded properties: Theta is an involution on trajectories, reversal
  holds across measurement spacings
"""

import math

import numpy as np
import pytest

from tests.fixtures import mz_schedule, seeded_real_hamiltonian, spin_z
from reversim.errors import (
    DimensionMismatchError,
    EndpointsUnreachableError,
    EnumerationCapError,
    InvalidStateError,
    PreconditionViolated,
    UnknownLabelError,
)
from reversim.markov import is_detailed_balance
from reversim.quantum import (
    AntiunitaryInvolution,
    HermitianOperator,
    MeasurementSchedule,
    StateVector,
    Trajectory,
    abl_conditional,
    abl_distribution,
    build_magnetization,
    build_site_operator,
    decompose_observable,
    detailed_balance_ratio,
    detailed_balance_table,
    enumerate_distribution,
    marginals,
    measurement_chain,
    random_hermitian,
    reverse_conditions,
    reverse_trajectory,
    spin_bernoulli_schedule,
    spin_involution,
    trajectory_probability,
    verify_abl_symmetry,
    verify_time_reversal,
)
from reversim.quantum.observables import SIGMA_X, SIGMA_Y, SIGMA_Z


def conjugation(n_sites: int) -> AntiunitaryInvolution:
    return AntiunitaryInvolution.conjugation(2**n_sites)


# =============================================================================
# Schedules and trajectories
# =============================================================================


class TestTrajectory:
    """Tests for Trajectory."""

    def test_str_joins_with_separator(self):
        assert str(Trajectory(("1", "0", "-1"))) == "1>0>-1"

    def test_parse(self):
        assert Trajectory.parse("1>0>-1") == Trajectory(("1", "0", "-1"))

    def test_ordering_and_hash(self):
        a, b = Trajectory(("0", "1")), Trajectory(("1", "0"))
        assert a < b
        assert len({a, b, Trajectory(("0", "1"))}) == 2


class TestMeasurementSchedule:
    """Tests for MeasurementSchedule."""

    def test_uniform_times(self):
        s = mz_schedule(2, steps=4, seed=0, dt=0.5)
        assert s.times == (0.0, 0.5, 1.0, 1.5)
        assert s.intervals == (0.5, 0.5, 0.5)
        assert s.n_trajectories() == 81

    def test_times_must_increase(self):
        h = HermitianOperator.zero(2)
        with pytest.raises(InvalidStateError):
            MeasurementSchedule([0.0, 1.0, 1.0], [spin_z()] * 3, h)

    def test_observable_count_must_match(self):
        with pytest.raises(DimensionMismatchError):
            MeasurementSchedule([0.0, 1.0], [spin_z()], HermitianOperator.zero(2))

    def test_preparation_after_first_time_rejected(self):
        with pytest.raises(InvalidStateError):
            MeasurementSchedule([0.0], [spin_z()], HermitianOperator.zero(2), preparation_time=1.0)

    def test_reversed_schedule(self):
        """Observables reversed, intervals reversed, start time kept."""
        h = HermitianOperator.zero(2)
        x = decompose_observable(HermitianOperator(SIGMA_X))
        s = MeasurementSchedule([0.0, 1.0, 3.0], [x, spin_z(), x], h)
        rev = s.reversed()
        assert rev.times == (0.0, 2.0, 3.0)
        assert rev.observables[1] is s.observables[1]
        assert not s.is_symmetric_spacing()

    def test_check_trajectory(self):
        s = mz_schedule(2, steps=2, seed=0)
        with pytest.raises(DimensionMismatchError):
            s.check_trajectory(Trajectory(("1",)))
        with pytest.raises(UnknownLabelError) as exc:
            s.check_trajectory(Trajectory(("1", "2")))
        assert exc.value.step == 1


# =============================================================================
# Exact probabilities
# =============================================================================


class TestProbabilities:
    """Tests for trajectory_probability and enumerate_distribution."""

    def test_distribution_sums_to_one(self):
        dist = enumerate_distribution(mz_schedule(3, steps=3, seed=1))
        assert len(dist) == 64
        assert dist.total() == pytest.approx(1.0, abs=1e-12)

    def test_enumeration_matches_single_trajectory(self):
        s = mz_schedule(2, steps=3, seed=2)
        dist = enumerate_distribution(s)
        omega = Trajectory(("1", "0", "-1"))
        assert dist[omega] == pytest.approx(trajectory_probability(s, omega), abs=1e-15)

    def test_workers_do_not_change_result(self):
        s = mz_schedule(2, steps=3, seed=3)
        assert dict(enumerate_distribution(s, workers=3)) == dict(enumerate_distribution(s))

    def test_spin_bernoulli(self):
        """Quarter-period flips make every sigma_z sequence equally likely."""
        s = spin_bernoulli_schedule(8)
        dist = enumerate_distribution(s)
        assert len(dist) == 256
        for p in dist.values():
            assert p == pytest.approx(2.0**-8, abs=1e-12)

    def test_spin_bernoulli_from_polarized_start(self):
        s = spin_bernoulli_schedule(4, start="up")
        for p in enumerate_distribution(s).values():
            assert p == pytest.approx(1 / 16, abs=1e-12)

    def test_trivial_dynamics_repeats_outcome(self):
        """With H = 0 a repeated measurement never changes its outcome."""
        s = MeasurementSchedule([0.0, 1.0, 2.0], [spin_z()] * 3, HermitianOperator.zero(2))
        dist = enumerate_distribution(s)
        assert dist[Trajectory(("1", "1", "1"))] == pytest.approx(0.5)
        assert dist[Trajectory(("1", "-1", "1"))] == 0.0

    def test_enumeration_cap(self, monkeypatch):
        monkeypatch.setenv("REVERSIM_ENUM_CAP", "10")
        with pytest.raises(EnumerationCapError) as exc:
            enumerate_distribution(mz_schedule(2, steps=3, seed=0))
        assert exc.value.count == 27
        assert exc.value.cap == 10


# =============================================================================
# Reversal theorem
# =============================================================================


class TestTimeReversal:
    """Tests for verify_time_reversal and reverse_trajectory."""

    def test_reverse_trajectory(self):
        obs = decompose_observable(build_magnetization(2))
        maps = reverse_conditions(spin_involution(2, "spin-flip"), obs)
        theta = reverse_trajectory(Trajectory(("1", "0", "0")), maps)
        assert theta == Trajectory(("0", "0", "-1"))

    def test_magnetization_three_sites(self):
        """Real H, conjugation, rho = 1/d: reversed trajectories are equally likely."""
        report = verify_time_reversal(mz_schedule(3, steps=4, seed=7), conjugation(3))
        assert report.max_deviation <= 1e-10
        assert len(report.rows) == 4**4
        assert report.holds(1e-10)

    def test_rows_pair_reversed_trajectories(self):
        report = verify_time_reversal(mz_schedule(2, steps=3, seed=4), conjugation(2))
        row = next(r for r in report.rows if str(r.omega) == "1>0>-1")
        assert str(row.reversed) == "-1>0>1"
        assert row.deviation == pytest.approx(0.0, abs=1e-12)

    def test_spin_flip_involution(self):
        """H = XX + ZZ/2 is even under global spin flip, which negates m_z."""
        h = HermitianOperator(np.kron(SIGMA_X, SIGMA_X) + 0.5 * np.kron(SIGMA_Z, SIGMA_Z))
        obs = decompose_observable(build_magnetization(2))
        s = MeasurementSchedule.uniform(h, obs, steps=3, dt=0.7)
        report = verify_time_reversal(s, spin_involution(2, "spin-flip"))
        assert report.max_deviation <= 1e-10
        row = next(r for r in report.rows if str(r.omega) == "1>1>0")
        assert str(row.reversed) == "0>-1>-1"

    def test_workers_give_same_report(self):
        s = mz_schedule(2, steps=3, seed=9)
        one = verify_time_reversal(s, conjugation(2))
        many = verify_time_reversal(s, conjugation(2), workers=4)
        assert one.max_deviation == many.max_deviation
        assert one.witness == many.witness


class TestHypotheses:
    """Each violated hypothesis is named."""

    def test_non_uniform_state(self):
        s = mz_schedule(2, steps=3, seed=0, initial_state=StateVector.basis(4, 0))
        with pytest.raises(PreconditionViolated) as exc:
            verify_time_reversal(s, conjugation(2))
        assert exc.value.hypothesis == "non-uniform initial state"

    def test_complex_hamiltonian(self):
        h = random_hermitian(4, np.random.default_rng(0))
        s = MeasurementSchedule.uniform(h, decompose_observable(build_magnetization(2)), 3)
        with pytest.raises(PreconditionViolated) as exc:
            verify_time_reversal(s, conjugation(2))
        assert exc.value.hypothesis == "pi H pi != H"

    def test_non_covariant_observable(self):
        obs = decompose_observable(HermitianOperator((SIGMA_X + SIGMA_Y) / np.sqrt(2)))
        s = MeasurementSchedule.uniform(HermitianOperator.zero(2), obs, 2)
        with pytest.raises(PreconditionViolated) as exc:
            verify_time_reversal(s, conjugation(1))
        assert exc.value.hypothesis == "non-covariant observables"

    def test_asymmetric_spacing(self):
        obs = decompose_observable(build_magnetization(2))
        s = MeasurementSchedule([0.0, 1.0, 3.0], [obs] * 3, seeded_real_hamiltonian(2, 0))
        with pytest.raises(PreconditionViolated) as exc:
            verify_time_reversal(s, conjugation(2))
        assert exc.value.hypothesis == "asymmetric time spacing"


# =============================================================================
# Dimension ratios
# =============================================================================


class TestDetailedBalanceRatio:
    """Tests for detailed_balance_ratio and detailed_balance_table."""

    def test_two_sites_up_to_zero(self):
        """From m = +1 (d = 1) to m = 0 (d = 2) the ratio is 2."""
        s = mz_schedule(2, steps=2, seed=3)
        r = detailed_balance_ratio(s, Trajectory(("1", "0")), conjugation(2))
        assert r.defined
        assert r.predicted == 2.0
        assert r.ratio == pytest.approx(2.0, rel=1e-8)

    def test_table_matches_dimensions(self):
        s = mz_schedule(3, steps=3, seed=5)
        table = detailed_balance_table(s, conjugation(3))
        assert len(table) == 64
        for r in table:
            if r.defined:
                assert r.ratio == pytest.approx(r.predicted, rel=1e-6)

    def test_zero_probability_is_undefined(self):
        s = MeasurementSchedule([0.0, 1.0], [spin_z()] * 2, HermitianOperator.zero(2))
        r = detailed_balance_ratio(s, Trajectory(("1", "-1")), conjugation(1))
        assert not r.defined
        assert math.isnan(r.ratio)
        assert math.isnan(r.deviation)


# =============================================================================
# Conditioning on both endpoints
# =============================================================================


class TestAbl:
    """Tests for abl_conditional, abl_distribution and verify_abl_symmetry."""

    def test_trivial_dynamics(self):
        s = MeasurementSchedule([0.0, 1.0, 2.0], [spin_z()] * 3, HermitianOperator.zero(2))
        assert abl_conditional(s, "1", "1", ["1"]) == pytest.approx(1.0)
        assert abl_conditional(s, "1", "1", ["-1"]) == pytest.approx(0.0)

    def test_unreachable_endpoints(self):
        s = MeasurementSchedule([0.0, 1.0, 2.0], [spin_z()] * 3, HermitianOperator.zero(2))
        with pytest.raises(EndpointsUnreachableError):
            abl_conditional(s, "1", "-1", ["1"])

    def test_distribution_sums_to_one(self):
        s = mz_schedule(2, steps=4, seed=6)
        dist = abl_distribution(s, "1", "0")
        assert len(dist) == 9
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)

    def test_matches_bayes_on_enumeration(self):
        """The channel-based denominator equals the enumerated endpoint marginal."""
        s = mz_schedule(2, steps=3, seed=8)
        dist = enumerate_distribution(s)
        endpoint = sum(p for w, p in dist.items() if w[0] == "0" and w[-1] == "1")
        omega = Trajectory(("0", "-1", "1"))
        expected = dist[omega] / endpoint
        assert abl_conditional(s, "0", "1", ["-1"]) == pytest.approx(expected, rel=1e-10)

    def test_time_symmetry(self):
        assert verify_abl_symmetry(mz_schedule(2, steps=4, seed=5), conjugation(2)) <= 1e-10

    def test_needs_two_times(self):
        s = MeasurementSchedule([0.0], [spin_z()], HermitianOperator.zero(2))
        with pytest.raises(InvalidStateError):
            abl_distribution(s, "1", "1")


# =============================================================================
# Marginals and measurement chains
# =============================================================================


class TestMarginals:
    """Tests for marginals and measurement_chain."""

    def test_mixed_state_is_stationary(self):
        """Under rho = 1/d each marginal is d_alpha / d at every time."""
        for m in marginals(mz_schedule(2, steps=3, seed=1)):
            assert m == pytest.approx({"-1": 0.25, "0": 0.5, "1": 0.25})

    def test_polarized_start(self):
        s = mz_schedule(2, steps=2, seed=1, initial_state=StateVector.basis(4, 0))
        first = marginals(s)[0]
        assert first["1"] == pytest.approx(1.0)

    def test_measurement_chain_is_reversible(self):
        chain = measurement_chain(mz_schedule(3, steps=2, seed=2))
        assert chain.states == ("-1", "-0.3333333333", "0.3333333333", "1")
        assert np.allclose(chain.p.sum(axis=1), 1.0)
        assert is_detailed_balance(chain, tol=1e-10).holds

    def test_measurement_chain_step_range(self):
        with pytest.raises(InvalidStateError):
            measurement_chain(mz_schedule(2, steps=2, seed=0), step=1)


# =============================================================================
# Seeded properties
# =============================================================================


class TestSeededReversal:
    """Reversal properties over seeded trajectories and spacings."""

    @pytest.mark.parametrize("kind,n_sites", [("conjugation", 3), ("spin-flip", 2), ("sx", 3)])
    def test_theta_is_an_involution(self, kind, n_sites):
        obs = decompose_observable(build_magnetization(n_sites))
        theta_map = reverse_conditions(spin_involution(n_sites, kind), obs)
        rng = np.random.default_rng(42)
        for _ in range(100):
            length = int(rng.integers(1, 8))
            omega = Trajectory(tuple(rng.choice(obs.labels, size=length).tolist()))
            assert reverse_trajectory(reverse_trajectory(omega, theta_map), theta_map) == omega

    def test_theta_twice_with_per_step_maps(self):
        """With one map per step, the second pass uses them in reverse order."""
        obs = [
            decompose_observable(build_magnetization(2)),
            decompose_observable(build_site_operator(2, 1, "z")),
            decompose_observable(build_magnetization(2)),
        ]
        pi = spin_involution(2, "spin-flip")
        maps = [reverse_conditions(pi, o) for o in obs]
        rng = np.random.default_rng(3)
        for _ in range(100):
            omega = Trajectory(tuple(str(rng.choice(o.labels)) for o in obs))
            theta = reverse_trajectory(omega, maps)
            assert reverse_trajectory(theta, maps[::-1]) == omega

    def test_holds_across_spacings(self):
        """Ten seeded spacings, each with its own real Hamiltonian."""
        rng = np.random.default_rng(2718)
        for k, dt in enumerate(rng.uniform(0.05, 5.0, size=10)):
            s = mz_schedule(2, steps=4, seed=k, dt=float(dt))
            report = verify_time_reversal(s, conjugation(2))
            assert report.holds(1e-10), (dt, report.witness)
