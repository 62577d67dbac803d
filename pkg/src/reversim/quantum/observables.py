"""Observables: spin operators, condition projectors and their reversal.

A measured observable is split into conditions, one per eigenvalue
cluster. Each condition carries its projector P_alpha and dimension
d_alpha = Tr P_alpha; the quantum Boltzmann entropy of a condition is
log d_alpha.

Site indices are 1-based, site 1 is the leftmost tensor factor, and the
single-spin basis is (|up>, |down>) so that sigma^z = diag(1, -1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Literal, Mapping

import numpy as np

from .. import config
from ..errors import (
    DimensionCapError,
    DimensionMismatchError,
    InvalidStateError,
    PiNotCovariantError,
    SiteOutOfRangeError,
    UnknownLabelError,
)
from .hilbert import (
    CONSTRUCTION_TOL,
    AntiunitaryInvolution,
    HermitianOperator,
    conjugate_operator,
    eigendecompose,
    max_abs,
)

logger = logging.getLogger(__name__)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

Axis = Literal["x", "y", "z"]


def condition_label(eigenvalue: float) -> str:
    """Canonical label: the eigenvalue rounded to 10 significant digits.

    Eigenvalues within CONSTRUCTION_TOL of zero are labelled "0".
    """
    rounded = float(f"{eigenvalue:.10g}")
    if abs(rounded) <= CONSTRUCTION_TOL:
        return "0"
    return f"{rounded:.10g}"


# ═══════════════════════════════════════════════════════════════════════════════
# Decomposition types
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class Condition:
    """One measurement outcome: label, eigenvalue, projector and dimension."""

    label: str
    eigenvalue: float
    projector: np.ndarray
    dim: int


class ObservableDecomposition:
    """An observable's eigenspaces as labelled conditions.

    Invariants (checked on construction):
    - each P_alpha is Hermitian and idempotent
    - sum of P_alpha is the identity (which with idempotence forces
      mutual orthogonality)
    - d_alpha = round(Tr P_alpha), and the d_alpha sum to d

    Example:
        obs = decompose_observable(build_magnetization(2))
        obs.labels               # ['-1', '0', '1']
        obs.dimension_of("0")    # 2
    """

    __slots__ = ("_conditions", "_by_label", "_dim")

    def __init__(self, conditions: list[Condition], tol: float = CONSTRUCTION_TOL) -> None:
        if not conditions:
            raise InvalidStateError("Observable needs at least one condition")
        dim = conditions[0].projector.shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        by_label: dict[str, Condition] = {}
        for c in conditions:
            p = c.projector
            if p.shape != (dim, dim):
                raise DimensionMismatchError((dim, dim), p.shape, f"projector '{c.label}'")
            if max_abs(p - p.conj().T) > tol:
                raise InvalidStateError(f"Projector '{c.label}' is not Hermitian")
            idem = max_abs(p @ p - p)
            if idem > tol:
                raise InvalidStateError(f"Projector '{c.label}' is not idempotent", idem)
            trace = float(np.trace(p).real)
            if abs(trace - c.dim) > 1e-8:
                raise InvalidStateError(f"Tr P for '{c.label}' differs from {c.dim}", trace)
            if c.label in by_label:
                raise InvalidStateError(f"Duplicate condition label '{c.label}'")
            by_label[c.label] = c
            total += p
        completeness = max_abs(total - np.eye(dim))
        if completeness > tol:
            raise InvalidStateError("Projectors do not sum to the identity", completeness)
        self._conditions = tuple(conditions)
        self._by_label = by_label
        self._dim = dim

    @property
    def dim(self) -> int:
        """Dimension d of the Hilbert space."""
        return self._dim

    @property
    def labels(self) -> list[str]:
        """Condition labels in ascending eigenvalue order."""
        return [c.label for c in self._conditions]

    @property
    def conditions(self) -> tuple[Condition, ...]:
        return self._conditions

    def condition(self, label: str) -> Condition:
        try:
            return self._by_label[label]
        except KeyError:
            raise UnknownLabelError(label, self.labels) from None

    def projector(self, label: str) -> np.ndarray:
        return self.condition(label).projector

    def dimension_of(self, label: str) -> int:
        return self.condition(label).dim

    def __iter__(self) -> Iterator[Condition]:
        return iter(self._conditions)

    def __len__(self) -> int:
        return len(self._conditions)

    def __contains__(self, label: object) -> bool:
        return label in self._by_label

    def __repr__(self) -> str:
        parts = ", ".join(f"{c.label} (d={c.dim})" for c in self._conditions)
        return f"ObservableDecomposition({parts})"


class ConditionReversalMap(Mapping[str, str]):
    """The pairing alpha -> alpha' induced by pi P_alpha pi = P_alpha'."""

    __slots__ = ("_pairs",)

    def __init__(self, pairs: Mapping[str, str]) -> None:
        self._pairs = dict(pairs)
        for a, b in self._pairs.items():
            if self._pairs.get(b) != a:
                raise InvalidStateError(f"Reversal map is not an involution at '{a}' -> '{b}'")

    @classmethod
    def identity(cls, labels: list[str]) -> ConditionReversalMap:
        return cls({label: label for label in labels})

    @property
    def pairs(self) -> dict[str, str]:
        return dict(self._pairs)

    def is_identity(self) -> bool:
        return all(a == b for a, b in self._pairs.items())

    def __getitem__(self, label: str) -> str:
        try:
            return self._pairs[label]
        except KeyError:
            raise UnknownLabelError(label, list(self._pairs)) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __repr__(self) -> str:
        return f"ConditionReversalMap({self._pairs})"


# ═══════════════════════════════════════════════════════════════════════════════
# Operations
# ═══════════════════════════════════════════════════════════════════════════════


def decompose_observable(
    a: HermitianOperator | np.ndarray, cluster_tol: float | None = None
) -> ObservableDecomposition:
    """Split an observable into conditions, one per eigenvalue cluster."""
    if cluster_tol is None:
        cluster_tol = config.get_setting("cluster_tol")
    clusters = eigendecompose(a, cluster_tol)
    conditions = []
    seen: dict[str, int] = {}
    for cluster in clusters:
        label = condition_label(cluster.eigenvalue)
        if label in seen:
            seen[label] += 1
            label = f"{label}#{seen[label]}"
        else:
            seen[label] = 0
        conditions.append(
            Condition(
                label=label,
                eigenvalue=cluster.eigenvalue,
                projector=cluster.projector(),
                dim=cluster.dim,
            )
        )
    return ObservableDecomposition(conditions)


def _check_sites(n_sites: int) -> int:
    if n_sites < 1:
        raise SiteOutOfRangeError(n_sites, n_sites)
    cap = config.get_setting("max_dim")
    dim = 2**n_sites
    if dim > cap:
        raise DimensionCapError(dim, cap)
    return dim


def build_magnetization(n_sites: int) -> HermitianOperator:
    """m_z = (1/N) sum_i sigma^z_i, diagonal in the computational basis."""
    dim = _check_sites(n_sites)
    downs = np.array([bin(i).count("1") for i in range(dim)])
    ups = n_sites - downs
    return HermitianOperator(np.diag((2 * ups - n_sites) / n_sites).astype(complex))


def build_site_operator(n_sites: int, site: int, which: Axis) -> HermitianOperator:
    """Pauli matrix `which` on `site` (1-based), identity elsewhere."""
    _check_sites(n_sites)
    if not 1 <= site <= n_sites:
        raise SiteOutOfRangeError(site, n_sites)
    if which not in PAULI:
        raise ValueError(f"Unknown Pauli axis {which!r}; expected x, y or z")
    m = np.ones((1, 1), dtype=complex)
    for k in range(1, n_sites + 1):
        m = np.kron(m, PAULI[which] if k == site else np.eye(2))
    return HermitianOperator(m)


def operator_sum(*ops: HermitianOperator) -> HermitianOperator:
    """Entrywise sum of operators on the same space."""
    if not ops:
        raise ValueError("operator_sum needs at least one operator")
    total = ops[0]
    for op in ops[1:]:
        total = total + op
    return total


def operator_difference(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    return a - b


def operator_scale(a: HermitianOperator, factor: float) -> HermitianOperator:
    return factor * a


def reverse_conditions(
    pi: AntiunitaryInvolution,
    obs: ObservableDecomposition,
    tol: float = CONSTRUCTION_TOL,
) -> ConditionReversalMap:
    """Pair every condition with its kinematical time-reversal.

    Raises:
        PiNotCovariantError: pi P_alpha pi is not one of the observable's projectors
    """
    if pi.dim != obs.dim:
        raise DimensionMismatchError(obs.dim, pi.dim, "involution vs observable")
    pairs: dict[str, str] = {}
    for c in obs:
        image = conjugate_operator(pi, c.projector)
        best_label, best_dev = None, float("inf")
        for other in obs:
            dev = max_abs(image - other.projector)
            if dev < best_dev:
                best_label, best_dev = other.label, dev
        if best_label is None or best_dev > tol:
            raise PiNotCovariantError(c.label, best_dev)
        pairs[c.label] = best_label
    logger.debug("reverse_conditions: %s", pairs)
    return ConditionReversalMap(pairs)


def spin_involution(n_sites: int, kind: str = "conjugation") -> AntiunitaryInvolution:
    """Named involutions on N spins.

    Kinds:
        conjugation - V = 1
        sx          - V = sigma_x on every site
        spin-flip   - V = i sigma_y on every site (pi^2 = 1 only for even N)
    """
    if kind == "conjugation":
        return AntiunitaryInvolution.conjugation(2**n_sites)
    if kind == "sx":
        return AntiunitaryInvolution.site_product(n_sites, SIGMA_X)
    if kind == "spin-flip":
        return AntiunitaryInvolution.site_product(n_sites, 1j * SIGMA_Y)
    raise ValueError(f"Unknown involution kind {kind!r}")
