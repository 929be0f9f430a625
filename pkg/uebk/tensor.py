"""
Complex vector and matrix primitives for a bipartite d x d' system.

Amplitudes live in the flat product basis: the entry at index i*d' + j is the
amplitude of |i>|j'>. Every helper here is a pure function of its inputs.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy import linalg

from uebk.config import TOL_ORTH, TOL_RANK, UebkError


class DimensionMismatchError(UebkError, ValueError):
    """Raised when amplitudes, matrices or vectors disagree on (d, d')."""


class ZeroVectorError(UebkError, ValueError):
    """Raised when a rank is requested for a (numerically) zero vector."""


class EmptyBasisError(UebkError, ValueError):
    """Raised when a subspace operation needs at least one basis vector."""


class NotOrthonormalError(UebkError, ValueError):
    """Raised when a set of vectors is expected to be orthonormal and is not."""


class NonFiniteAmplitudeError(UebkError, ValueError):
    """Raised when an amplitude is NaN or infinite."""


@dataclass(frozen=True, eq=False)
class BipartiteVector:
    """A pure (not necessarily normalized) vector of C^d (x) C^d'."""

    d: int
    dprime: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).ravel()
        if self.d < 1 or self.dprime < 1:
            raise DimensionMismatchError(
                f"Dimensions must be positive, got d={self.d}, d'={self.dprime}"
            )
        if amps.size != self.d * self.dprime:
            raise DimensionMismatchError(
                f"Expected {self.d * self.dprime} amplitudes for a "
                f"{self.d}x{self.dprime} system, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise NonFiniteAmplitudeError("Amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    def __eq__(self, other):
        if not isinstance(other, BipartiteVector):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.amps, other.amps)
        )

    __hash__ = None

    @property
    def shape(self) -> Tuple[int, int]:
        return self.d, self.dprime

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = TOL_ORTH) -> bool:
        return abs(float(np.vdot(self.amps, self.amps).real) - 1.0) <= tol

    def scaled(self, factor: complex) -> "BipartiteVector":
        return BipartiteVector(self.d, self.dprime, self.amps * factor)

    @classmethod
    def basis_state(cls, d: int, dprime: int, i: int, j: int) -> "BipartiteVector":
        """Product state |i>|j'>."""
        amps = np.zeros(d * dprime, dtype=np.complex128)
        amps[i * dprime + j] = 1.0
        return cls(d, dprime, amps)


def matricize(v: BipartiteVector) -> np.ndarray:
    """Return the d x d' coefficient matrix of v (entry [i, j] is <i|<j'|v>)."""
    if v.amps.size != v.d * v.dprime:
        raise DimensionMismatchError(
            f"Vector declares {v.d}x{v.dprime} but holds {v.amps.size} amplitudes"
        )
    return v.amps.reshape(v.d, v.dprime).copy()


def vectorize(matrix: np.ndarray) -> BipartiteVector:
    """Inverse of matricize."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.size == 0:
        raise DimensionMismatchError(
            f"Coefficient matrix must be a non-empty 2d array, got shape {matrix.shape}"
        )
    rows, cols = matrix.shape
    return BipartiteVector(rows, cols, matrix.reshape(-1))


def singular_values(matrix: np.ndarray) -> np.ndarray:
    """Schmidt coefficients of a coefficient matrix, in descending order."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.size == 0:
        raise DimensionMismatchError(
            f"Coefficient matrix must be a non-empty 2d array, got shape {matrix.shape}"
        )
    return linalg.svdvals(matrix)


def schmidt_rank(v: BipartiteVector, tol_rank: float = TOL_RANK) -> int:
    """Number of singular values above tol_rank times the largest one."""
    if v.norm() < tol_rank:
        raise ZeroVectorError(
            f"Vector norm {v.norm():.3e} is below the rank tolerance {tol_rank:.1e}"
        )
    values = singular_values(matricize(v))
    return int(np.count_nonzero(values > tol_rank * values[0]))


def reduced_state(v: BipartiteVector) -> np.ndarray:
    """Partial trace of |v><v| over subsystem B."""
    rho = np.outer(v.amps, v.amps.conj())
    rho = rho.reshape(v.d, v.dprime, v.d, v.dprime)
    return np.trace(rho, axis1=1, axis2=3)


def reduced_rank(v: BipartiteVector, tol: float = 1e-12) -> int:
    """rank(rho_1) by counting eigenvalues above tol times the largest one."""
    eigs = linalg.eigvalsh(reduced_state(v))
    top = eigs.max()
    if top <= 0:
        raise ZeroVectorError("Reduced state of a zero vector has no rank")
    return int(np.count_nonzero(eigs > tol * top))


def _check_shapes(vs: Sequence[BipartiteVector]) -> Tuple[int, int]:
    if not vs:
        raise EmptyBasisError("At least one vector is required")
    shape = vs[0].shape
    for v in vs[1:]:
        if v.shape != shape:
            raise DimensionMismatchError(
                f"Mixed dimensions in vector list: {shape} and {v.shape}"
            )
    return shape


def as_columns(vs: Sequence[BipartiteVector]) -> np.ndarray:
    """Stack vectors as the columns of a (d*d') x n matrix."""
    _check_shapes(vs)
    return np.column_stack([v.amps for v in vs])


def gram(vs: Sequence[BipartiteVector]) -> np.ndarray:
    """Gram matrix G[a, b] = <v_a|v_b>."""
    columns = as_columns(vs)
    return columns.conj().T @ columns


def max_gram_deviation(vs: Sequence[BipartiteVector]) -> float:
    g = gram(vs)
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """An orthonormal spanning set of a subspace of C^d (x) C^d'."""

    d: int
    dprime: int
    vectors: Tuple[BipartiteVector, ...]
    tol: float = TOL_ORTH

    def __post_init__(self):
        vectors = tuple(self.vectors)
        object.__setattr__(self, "vectors", vectors)
        for v in vectors:
            if v.shape != (self.d, self.dprime):
                raise DimensionMismatchError(
                    f"Basis vector of shape {v.shape} in a {self.d}x{self.dprime} subspace"
                )
        deviation = max_gram_deviation(vectors) if vectors else 0.0
        if deviation > self.tol:
            raise NotOrthonormalError(
                f"Basis vectors deviate from orthonormality by {deviation:.3e}"
            )

    @property
    def ambient_dim(self) -> int:
        return self.d * self.dprime

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> np.ndarray:
        if not self.vectors:
            return np.zeros((self.ambient_dim, 0), dtype=np.complex128)
        return as_columns(self.vectors)

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the span.

        Exact even when the vectors are only within tol of orthonormal.
        """
        if not self.vectors:
            return np.zeros((self.ambient_dim, self.ambient_dim), dtype=np.complex128)
        q_mat, _ = linalg.qr(self.matrix, mode="economic")
        return q_mat @ q_mat.conj().T

    @classmethod
    def from_columns(
        cls, d: int, dprime: int, columns: np.ndarray, tol: float = TOL_ORTH
    ) -> "SubspaceBasis":
        columns = np.asarray(columns, dtype=np.complex128)
        if columns.ndim != 2 or columns.shape[0] != d * dprime:
            raise DimensionMismatchError(
                f"Column matrix of shape {columns.shape} does not fit a {d}x{dprime} system"
            )
        return cls(d, dprime, tuple(BipartiteVector(d, dprime, c) for c in columns.T), tol)

    @classmethod
    def full(cls, d: int, dprime: int) -> "SubspaceBasis":
        return cls.from_columns(d, dprime, np.eye(d * dprime))


def projector_distance(a: SubspaceBasis, b: SubspaceBasis) -> float:
    """Spectral norm of P_a - P_b; zero iff the two subspaces coincide."""
    if (a.d, a.dprime) != (b.d, b.dprime):
        raise DimensionMismatchError(
            f"Cannot compare subspaces of {a.d}x{a.dprime} and {b.d}x{b.dprime}"
        )
    return float(np.linalg.norm(a.projector() - b.projector(), ord=2))


def random_coefficients(rng: np.random.Generator, n: int) -> np.ndarray:
    """n complex Gaussian coefficients; real and imaginary parts drawn pairwise."""
    pairs = rng.standard_normal((n, 2))
    return pairs[:, 0] + 1j * pairs[:, 1]


def combine(basis: SubspaceBasis, coefficients: Iterable[complex]) -> BipartiteVector:
    amps = basis.matrix @ np.asarray(list(coefficients), dtype=np.complex128)
    return BipartiteVector(basis.d, basis.dprime, amps)


def random_unit_in_span(basis: SubspaceBasis, seed: int) -> BipartiteVector:
    """Seeded, normalized random combination of the basis vectors."""
    if basis.dim == 0:
        raise EmptyBasisError("Cannot sample from the span of an empty basis")
    rng = np.random.default_rng(seed)
    v = combine(basis, random_coefficients(rng, basis.dim))
    return v.scaled(1.0 / v.norm())
