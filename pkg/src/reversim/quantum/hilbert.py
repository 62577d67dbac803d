"""Hilbert: finite-dimensional complex linear algebra for reversal checks.

Value types (all immutable after construction):
- StateVector: normalized amplitude vector
- DensityMatrix: Hermitian, positive, unit-trace matrix
- HermitianOperator: observable or Hamiltonian
- UnitaryOperator: evolution U(t) = exp(-itH), with hbar = 1
- AntiunitaryInvolution: pi(psi) = V conj(psi) with V conj(V) = 1

Operations:
- eigendecompose(H, cluster_tol): clustered Hermitian spectrum
- evolve(H, t): exact matrix exponential via the eigendecomposition
- apply_involution(pi, psi) and conjugate_operator(pi, A)
- check_reversal_symmetry(H, pi, t, tol): tests pi U(t) pi = U(t)^dagger
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import (
    DimensionMismatchError,
    InvalidStateError,
    NotAnInvolutionError,
    NotHermitianError,
)

logger = logging.getLogger(__name__)

# Construction invariants are checked at this tolerance
CONSTRUCTION_TOL = 1e-10
# Algebraic identities (unitarity of exp(-itH), pi^2 = 1) are expected at this one
IDENTITY_TOL = 1e-12

Matrix = np.ndarray


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _square(entries: np.ndarray | Sequence, what: str) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("square matrix", tuple(a.shape), what)
    return a


def max_abs(a: np.ndarray) -> float:
    """Max-norm of a matrix or vector (0.0 for empty input)."""
    return float(np.max(np.abs(a))) if a.size else 0.0


# ═══════════════════════════════════════════════════════════════════════════════
# Value types
# ═══════════════════════════════════════════════════════════════════════════════


class StateVector:
    """A normalized vector of complex amplitudes.

    The vector is normalized on construction; the zero vector is rejected.

    Example:
        up = StateVector([1, 0])
        plus = StateVector([1, 1])          # stored as (1, 1)/sqrt(2)
        assert plus.equals_up_to_phase(StateVector([-1, -1]))
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes: Sequence[complex] | np.ndarray) -> None:
        a = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if a.size == 0:
            raise InvalidStateError("State vector must have at least one amplitude")
        norm = np.linalg.norm(a)
        if norm == 0.0 or not np.isfinite(norm):
            raise InvalidStateError("State vector has zero or non-finite norm")
        self._amplitudes = _frozen(a / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> StateVector:
        """Computational basis vector |index> in dimension dim."""
        if not 0 <= index < dim:
            raise DimensionMismatchError(dim, index, "basis index")
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a)

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only amplitude array."""
        return self._amplitudes

    @property
    def dim(self) -> int:
        """Dimension d of the Hilbert space."""
        return int(self._amplitudes.shape[0])

    def overlap(self, other: StateVector) -> complex:
        """Inner product <self|other>."""
        _check_dims(self.dim, other.dim, "state overlap")
        return complex(np.vdot(self._amplitudes, other._amplitudes))

    def equals_up_to_phase(self, other: StateVector, tol: float = CONSTRUCTION_TOL) -> bool:
        """True when |<self|other>| = 1 within tol."""
        return abs(abs(self.overlap(other)) - 1.0) <= tol

    def to_density(self) -> DensityMatrix:
        """Projector |psi><psi| as a density matrix."""
        return DensityMatrix(np.outer(self._amplitudes, self._amplitudes.conj()))

    def __repr__(self) -> str:
        amps = ", ".join(f"{z:.3g}" for z in self._amplitudes[:4])
        if self.dim > 4:
            amps += ", ..."
        return f"StateVector(dim={self.dim}, [{amps}])"


class DensityMatrix:
    """A Hermitian, positive semidefinite, unit-trace matrix.

    Example:
        rho = DensityMatrix.maximally_mixed(4)
        assert rho.is_maximally_mixed()
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: np.ndarray | Sequence, tol: float = CONSTRUCTION_TOL) -> None:
        a = _square(entries, "density matrix")
        asym = max_abs(a - a.conj().T)
        if asym > tol:
            raise NotHermitianError(asym, tol)
        a = (a + a.conj().T) / 2
        trace = float(np.trace(a).real)
        if abs(trace - 1.0) > tol:
            raise InvalidStateError("Density matrix trace differs from 1", abs(trace - 1.0))
        lowest = float(np.linalg.eigvalsh(a)[0])
        if lowest < -tol:
            raise InvalidStateError("Density matrix has a negative eigenvalue", -lowest)
        self._entries = _frozen(a)

    @classmethod
    def maximally_mixed(cls, dim: int) -> DensityMatrix:
        """The normalized unit matrix 1/d."""
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def from_state(cls, psi: StateVector) -> DensityMatrix:
        """Pure state |psi><psi|."""
        return psi.to_density()

    @property
    def entries(self) -> np.ndarray:
        """Read-only matrix entries."""
        return self._entries

    @property
    def dim(self) -> int:
        """Dimension d of the Hilbert space."""
        return int(self._entries.shape[0])

    def is_maximally_mixed(self, tol: float = CONSTRUCTION_TOL) -> bool:
        """True when the matrix equals 1/d within tol."""
        return max_abs(self._entries - np.eye(self.dim) / self.dim) <= tol

    def __repr__(self) -> str:
        kind = "mixed" if self.is_maximally_mixed() else "general"
        return f"DensityMatrix(dim={self.dim}, {kind})"


class HermitianOperator:
    """A matrix equal to its conjugate transpose.

    Supports +, -, unary -, and scaling by real numbers, so observables
    can be assembled from site operators:

        total = site_operator(2, 1, "z") + site_operator(2, 2, "z")
        flip = 0.5 * (identity(2) - site_operator(1, 1, "x"))
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: np.ndarray | Sequence, tol: float = CONSTRUCTION_TOL) -> None:
        a = _square(entries, "Hermitian operator")
        asym = max_abs(a - a.conj().T)
        if asym > tol:
            raise NotHermitianError(asym, tol)
        self._entries = _frozen((a + a.conj().T) / 2)

    @classmethod
    def zero(cls, dim: int) -> HermitianOperator:
        return cls(np.zeros((dim, dim), dtype=complex))

    @classmethod
    def identity(cls, dim: int) -> HermitianOperator:
        return cls(np.eye(dim, dtype=complex))

    @property
    def entries(self) -> np.ndarray:
        """Read-only matrix entries."""
        return self._entries

    @property
    def dim(self) -> int:
        """Dimension d of the Hilbert space."""
        return int(self._entries.shape[0])

    def is_real(self, tol: float = CONSTRUCTION_TOL) -> bool:
        """True when every entry has vanishing imaginary part."""
        return max_abs(self._entries.imag) <= tol

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        _check_dims(self.dim, other.dim, "operator sum")
        return HermitianOperator(self._entries + other._entries)

    def __sub__(self, other: HermitianOperator) -> HermitianOperator:
        _check_dims(self.dim, other.dim, "operator difference")
        return HermitianOperator(self._entries - other._entries)

    def __neg__(self) -> HermitianOperator:
        return HermitianOperator(-self._entries)

    def __mul__(self, scalar: float) -> HermitianOperator:
        if isinstance(scalar, complex) and scalar.imag != 0:
            raise NotHermitianError(abs(scalar.imag), 0.0)
        return HermitianOperator(float(np.real(scalar)) * self._entries)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


class UnitaryOperator:
    """A matrix U with U^dagger U = 1."""

    __slots__ = ("_entries",)

    def __init__(self, entries: np.ndarray | Sequence, tol: float = CONSTRUCTION_TOL) -> None:
        a = _square(entries, "unitary operator")
        dev = max_abs(a.conj().T @ a - np.eye(a.shape[0]))
        if dev > tol:
            raise InvalidStateError("Operator is not unitary", dev)
        self._entries = _frozen(a)

    @property
    def entries(self) -> np.ndarray:
        """Read-only matrix entries."""
        return self._entries

    @property
    def dim(self) -> int:
        return int(self._entries.shape[0])

    def adjoint(self) -> UnitaryOperator:
        """U^dagger = U^-1."""
        return UnitaryOperator(self._entries.conj().T)

    def unitarity_deviation(self) -> float:
        """max |U^dagger U - 1|."""
        return max_abs(self._entries.conj().T @ self._entries - np.eye(self.dim))

    def apply(self, psi: StateVector) -> StateVector:
        _check_dims(self.dim, psi.dim, "unitary action")
        return StateVector(self._entries @ psi.amplitudes)

    def __matmul__(self, other: UnitaryOperator) -> UnitaryOperator:
        _check_dims(self.dim, other.dim, "unitary product")
        return UnitaryOperator(self._entries @ other._entries)

    def __repr__(self) -> str:
        return f"UnitaryOperator(dim={self.dim})"


class AntiunitaryInvolution:
    """Kinematical time-reversal pi(psi) = V conj(psi).

    V must be unitary and satisfy V conj(V) = 1, so that pi squares to
    the identity. The default V = 1 is plain complex conjugation in the
    computational basis.

    Example:
        pi = AntiunitaryInvolution.conjugation(2)
        pi.apply(StateVector([1, 1j]))      # -> (1, -1j)/sqrt(2)
    """

    __slots__ = ("_basis_map",)

    def __init__(self, basis_map: np.ndarray | Sequence, tol: float = CONSTRUCTION_TOL) -> None:
        v = _square(basis_map, "involution basis map")
        dev = max_abs(v.conj().T @ v - np.eye(v.shape[0]))
        if dev > tol:
            raise InvalidStateError("Involution basis map is not unitary", dev)
        square = max_abs(v @ v.conj() - np.eye(v.shape[0]))
        if square > tol:
            raise NotAnInvolutionError("V conj(V)", square)
        self._basis_map = _frozen(v)

    @classmethod
    def conjugation(cls, dim: int) -> AntiunitaryInvolution:
        """Plain complex conjugation (V = 1)."""
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def site_product(cls, n_sites: int, site_map: np.ndarray) -> AntiunitaryInvolution:
        """V = site_map tensored over n_sites spins."""
        v = np.ones((1, 1), dtype=complex)
        for _ in range(n_sites):
            v = np.kron(v, site_map)
        return cls(v)

    @property
    def basis_map(self) -> np.ndarray:
        """Read-only unitary V."""
        return self._basis_map

    @property
    def dim(self) -> int:
        return int(self._basis_map.shape[0])

    def apply(self, psi: StateVector) -> StateVector:
        """pi(psi) = V conj(psi)."""
        return apply_involution(self, psi)

    def __repr__(self) -> str:
        kind = "conjugation" if max_abs(self._basis_map - np.eye(self.dim)) == 0 else "general"
        return f"AntiunitaryInvolution(dim={self.dim}, {kind})"


def _check_dims(expected: int, got: int, what: str) -> None:
    if expected != got:
        raise DimensionMismatchError(expected, got, what)


# ═══════════════════════════════════════════════════════════════════════════════
# Spectral operations
# ═══════════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class EigenCluster:
    """One eigenvalue cluster: representative eigenvalue and orthonormal basis.

    Attributes:
        eigenvalue: Mean of the clustered eigenvalues
        basis: Orthonormal eigenvectors spanning the cluster's eigenspace
    """

    eigenvalue: float
    basis: tuple[StateVector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def projector(self) -> np.ndarray:
        """Sum of |v><v| over the basis; independent of the basis choice."""
        vecs = np.column_stack([v.amplitudes for v in self.basis])
        return vecs @ vecs.conj().T


def _as_hermitian(h: HermitianOperator | np.ndarray) -> HermitianOperator:
    return h if isinstance(h, HermitianOperator) else HermitianOperator(h)


def eigendecompose(
    h: HermitianOperator | np.ndarray, cluster_tol: float = 1e-8
) -> list[EigenCluster]:
    """Clustered spectral decomposition of a Hermitian operator.

    Eigenvalues are sorted ascending; neighbours closer than cluster_tol
    fall into the same cluster.

    Args:
        h: Hermitian operator (raw arrays are validated first)
        cluster_tol: Merge threshold, must be positive

    Returns:
        Clusters in ascending eigenvalue order; their bases together span
        the whole space.
    """
    if cluster_tol <= 0:
        raise ValueError(f"cluster_tol must be positive, got {cluster_tol}")
    h = _as_hermitian(h)
    values, vectors = np.linalg.eigh(h.entries)

    groups: list[list[int]] = []
    for i, value in enumerate(values):
        if groups and value - values[groups[-1][-1]] <= cluster_tol:
            groups[-1].append(i)
        else:
            groups.append([i])

    clusters = [
        EigenCluster(
            eigenvalue=float(np.mean(values[g])),
            basis=tuple(StateVector(vectors[:, i]) for i in g),
        )
        for g in groups
    ]
    logger.debug("eigendecompose: dim=%d, %d clusters", h.dim, len(clusters))
    return clusters


def evolve(h: HermitianOperator | np.ndarray, t: float) -> UnitaryOperator:
    """U(t) = exp(-itH) computed from the full eigendecomposition."""
    h = _as_hermitian(h)
    values, vectors = np.linalg.eigh(h.entries)
    phases = np.exp(-1j * t * values)
    return UnitaryOperator((vectors * phases) @ vectors.conj().T)


def apply_involution(pi: AntiunitaryInvolution, psi: StateVector) -> StateVector:
    """pi(psi) = V conj(psi)."""
    _check_dims(pi.dim, psi.dim, "involution action")
    return StateVector(pi.basis_map @ psi.amplitudes.conj())


def conjugate_operator(
    pi: AntiunitaryInvolution,
    a: np.ndarray | HermitianOperator | UnitaryOperator,
) -> np.ndarray:
    """Matrix of psi -> pi(A(pi psi)), i.e. V conj(A) V^dagger."""
    m = a.entries if isinstance(a, (HermitianOperator, UnitaryOperator)) else np.asarray(a)
    m = _square(m, "conjugated operator")
    _check_dims(pi.dim, m.shape[0], "operator conjugation")
    v = pi.basis_map
    return v @ m.conj() @ v.conj().T


@dataclass(frozen=True)
class ReversalSymmetry:
    """Outcome of check_reversal_symmetry.

    Attributes:
        holds: max_deviation <= tol
        max_deviation: max |pi U(t) pi - U(t)^dagger|
        hamiltonian_deviation: max |pi H pi - H| (independent of t)
    """

    holds: bool
    max_deviation: float
    hamiltonian_deviation: float


def check_reversal_symmetry(
    h: HermitianOperator | np.ndarray,
    pi: AntiunitaryInvolution,
    t: float = 1.0,
    tol: float = CONSTRUCTION_TOL,
) -> ReversalSymmetry:
    """Test pi U(t) pi = U(t)^dagger for U(t) = exp(-itH)."""
    h = _as_hermitian(h)
    u = evolve(h, t)
    deviation = max_abs(conjugate_operator(pi, u) - u.entries.conj().T)
    h_dev = hamiltonian_reversal_deviation(h, pi)
    return ReversalSymmetry(
        holds=deviation <= tol, max_deviation=deviation, hamiltonian_deviation=h_dev
    )


def hamiltonian_reversal_deviation(h: HermitianOperator, pi: AntiunitaryInvolution) -> float:
    """max |pi H pi - H|; zero exactly when pi commutes with H."""
    return max_abs(conjugate_operator(pi, h) - h.entries)


def random_hermitian(
    dim: int, rng: np.random.Generator, *, real: bool = False, scale: float = 1.0
) -> HermitianOperator:
    """Draw from the Gaussian orthogonal (real=True) or unitary ensemble."""
    x = rng.standard_normal((dim, dim))
    if not real:
        x = x + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * (x + x.conj().T) / 2)
