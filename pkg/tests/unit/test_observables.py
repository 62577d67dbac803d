"""Tests for observables and their conditions.

Tests cover:
- condition_label canonical form
- decompose_observable: labels, dimensions, projector invariants
- build_magnetization / build_site_operator on the spin basis
- reverse_conditions under conjugation and spin flip
- dimension cap from REVERSIM_MAX_DIM
- seeded invariants: site-permutation symmetry of m_z, projector
  completeness on random and degenerate spectra
"""

import itertools

import numpy as np
import pytest

from reversim.errors import (
    DimensionCapError,
    InvalidStateError,
    PiNotCovariantError,
    SiteOutOfRangeError,
    UnknownLabelError,
)
from reversim.quantum import (
    AntiunitaryInvolution,
    ConditionReversalMap,
    HermitianOperator,
    build_magnetization,
    build_site_operator,
    decompose_observable,
    operator_difference,
    operator_sum,
    random_hermitian,
    reverse_conditions,
    spin_involution,
)
from reversim.quantum.observables import SIGMA_X, SIGMA_Y, condition_label


# =============================================================================
# Labels and decomposition
# =============================================================================


class TestConditionLabel:
    """Tests for condition_label."""

    @pytest.mark.parametrize(
        "value,label",
        [(1.0, "1"), (-1.0, "-1"), (0.0, "0"), (-1e-17, "0"), (1 / 3, "0.3333333333")],
    )
    def test_canonical_form(self, value, label):
        assert condition_label(value) == label

    def test_roundoff_collapses(self):
        """Values equal to ten digits share a label."""
        assert condition_label(0.5) == condition_label(0.5 + 1e-14)


class TestDecomposeObservable:
    """Tests for decompose_observable."""

    def test_magnetization_two_sites(self):
        """m_z on two spins: -1, 0, 1 with dimensions 1, 2, 1."""
        obs = decompose_observable(build_magnetization(2))
        assert obs.labels == ["-1", "0", "1"]
        assert [obs.dimension_of(a) for a in obs.labels] == [1, 2, 1]
        assert obs.dim == 4

    def test_magnetization_three_sites(self):
        """Binomial dimensions 1, 3, 3, 1."""
        obs = decompose_observable(build_magnetization(3))
        assert obs.labels == ["-1", "-0.3333333333", "0.3333333333", "1"]
        assert [c.dim for c in obs] == [1, 3, 3, 1]

    def test_projectors_resolve_identity(self):
        obs = decompose_observable(build_magnetization(3))
        total = sum(c.projector for c in obs)
        assert np.allclose(total, np.eye(8))
        for c in obs:
            assert np.allclose(c.projector @ c.projector, c.projector)

    def test_unknown_label(self):
        obs = decompose_observable(build_magnetization(2))
        with pytest.raises(UnknownLabelError) as exc:
            obs.projector("2")
        assert exc.value.available == ["-1", "0", "1"]

    def test_contains(self):
        obs = decompose_observable(HermitianOperator(SIGMA_X))
        assert "1" in obs
        assert "0" not in obs
        assert len(obs) == 2


# =============================================================================
# Spin operators
# =============================================================================


class TestSpinOperators:
    """Tests for build_magnetization and build_site_operator."""

    def test_basis_order(self):
        """Index 0 is all up; site 1 is the leftmost factor."""
        m = build_magnetization(2).entries.diagonal().real
        assert m.tolist() == [1.0, 0.0, 0.0, -1.0]
        z1 = build_site_operator(2, 1, "z").entries.diagonal().real
        assert z1.tolist() == [1.0, 1.0, -1.0, -1.0]

    def test_sum_and_difference(self):
        """sigma_1 + sigma_2 and sigma_1 - sigma_2 on (uu, ud, du, dd)."""
        z1 = build_site_operator(2, 1, "z")
        z2 = build_site_operator(2, 2, "z")
        assert operator_sum(z1, z2).entries.diagonal().real.tolist() == [2, 0, 0, -2]
        assert operator_difference(z1, z2).entries.diagonal().real.tolist() == [0, 2, -2, 0]

    def test_site_out_of_range(self):
        with pytest.raises(SiteOutOfRangeError):
            build_site_operator(2, 3, "x")

    def test_zero_sites(self):
        with pytest.raises(SiteOutOfRangeError):
            build_magnetization(0)

    def test_unknown_axis(self):
        with pytest.raises(ValueError):
            build_site_operator(1, 1, "w")

    def test_dimension_cap_from_environment(self, monkeypatch):
        """REVERSIM_MAX_DIM lowers the largest space that may be built."""
        monkeypatch.setenv("REVERSIM_MAX_DIM", "8")
        build_magnetization(3)
        with pytest.raises(DimensionCapError) as exc:
            build_magnetization(4)
        assert exc.value.cap == 8


# =============================================================================
# Reversal of conditions
# =============================================================================


class TestReverseConditions:
    """Tests for reverse_conditions and ConditionReversalMap."""

    def test_conjugation_fixes_magnetization(self):
        obs = decompose_observable(build_magnetization(2))
        maps = reverse_conditions(AntiunitaryInvolution.conjugation(4), obs)
        assert maps.is_identity()

    def test_spin_flip_negates_magnetization(self):
        """V = i sigma_y on both sites maps m to -m."""
        obs = decompose_observable(build_magnetization(2))
        maps = reverse_conditions(spin_involution(2, "spin-flip"), obs)
        assert maps.pairs == {"-1": "1", "0": "0", "1": "-1"}

    def test_sigma_y_swaps_under_conjugation(self):
        obs = decompose_observable(HermitianOperator(SIGMA_Y))
        maps = reverse_conditions(AntiunitaryInvolution.conjugation(2), obs)
        assert maps["1"] == "-1"

    def test_non_covariant_observable(self):
        """(sigma_x + sigma_y)/sqrt 2 is mapped to a different axis by conjugation."""
        obs = decompose_observable(HermitianOperator((SIGMA_X + SIGMA_Y) / np.sqrt(2)))
        with pytest.raises(PiNotCovariantError) as exc:
            reverse_conditions(AntiunitaryInvolution.conjugation(2), obs)
        assert exc.value.deviation > 0.1

    def test_map_must_be_involution(self):
        with pytest.raises(InvalidStateError):
            ConditionReversalMap({"a": "b", "b": "c", "c": "a"})

    def test_unknown_label_lookup(self):
        maps = ConditionReversalMap.identity(["0", "1"])
        with pytest.raises(UnknownLabelError):
            maps["2"]


# =============================================================================
# Seeded invariants
# =============================================================================


def site_permutation_matrix(n_sites: int, perm: tuple[int, ...]) -> np.ndarray:
    """Permutation of tensor factors: output site k carries input site perm[k]."""
    d = 2**n_sites
    out = np.zeros((d, d))
    for idx in range(d):
        bits = [(idx >> (n_sites - 1 - k)) & 1 for k in range(n_sites)]
        moved = [bits[perm[k]] for k in range(n_sites)]
        new = int("".join(map(str, moved)), 2)
        out[new, idx] = 1.0
    return out


class TestMagnetizationSymmetry:
    """m_z is invariant under every relabelling of sites."""

    @pytest.mark.parametrize("n_sites", [1, 2, 3, 4])
    def test_commutes_with_site_permutations(self, n_sites):
        m = build_magnetization(n_sites).entries
        for perm in itertools.permutations(range(n_sites)):
            p = site_permutation_matrix(n_sites, perm)
            assert np.allclose(p @ m, m @ p, atol=1e-12), perm


class TestDecompositionInvariants:
    """Projector invariants on seeded random observables with d <= 16."""

    def check_invariants(self, obs, d):
        total = np.zeros((d, d), dtype=complex)
        for c in obs:
            p = c.projector
            assert np.allclose(p @ p, p, atol=1e-10)
            assert np.allclose(p, p.conj().T, atol=1e-10)
            assert abs(np.trace(p).real - c.dim) <= 1e-8
            total += p
        assert np.allclose(total, np.eye(d), atol=1e-10)
        assert sum(c.dim for c in obs) == d

    @pytest.mark.parametrize("d", [2, 3, 4, 8, 16])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_random_hermitian(self, d, seed):
        h = random_hermitian(d, np.random.default_rng(seed))
        obs = decompose_observable(h)
        self.check_invariants(obs, d)
        assert len(obs) == d

    @pytest.mark.parametrize("d", [4, 8, 16])
    def test_degenerate_spectrum(self, d):
        """Repeated eigenvalues in a random basis are clustered together."""
        rng = np.random.default_rng(d)
        q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        eigenvalues = np.repeat([-1.0, 0.5, 2.0, 3.0], d // 4)
        h = HermitianOperator(q @ np.diag(eigenvalues) @ q.conj().T)
        obs = decompose_observable(h)
        self.check_invariants(obs, d)
        assert obs.labels == ["-1", "0.5", "2", "3"]
        assert [obs.dimension_of(x) for x in obs.labels] == [d // 4] * 4
