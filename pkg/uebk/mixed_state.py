"""
The normalized projector onto the orthocomplement of a family, and checks on it.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from uebk.config import (
    RANGE_TOL,
    STATE_TOL,
    TOL_ORTH,
    TOL_RANK,
    UebkError,
    VerifyConfig,
    get_logger,
)
from uebk.constructions import FamilyParams, UebkFamily
from uebk.tensor import SubspaceBasis, projector_distance
from uebk.verification import complement_basis, generic_max_schmidt_rank, span_basis

LOG = get_logger()


class EmptyComplementError(UebkError, ValueError):
    """Raised when a family already spans the whole space."""


class ZeroStateError(UebkError, ValueError):
    """Raised when a density matrix has no range."""


class InvalidStateError(UebkError, ValueError):
    """Raised when a matrix is not Hermitian, not unit trace or not positive."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    d: int
    dprime: int
    entries: np.ndarray
    origin: Optional[FamilyParams] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        dim = self.d * self.dprime
        if entries.shape != (dim, dim):
            raise InvalidStateError(
                f"Expected a {dim}x{dim} matrix for a {self.d}x{self.dprime} system, "
                f"got {entries.shape}"
            )
        hermiticity = float(np.max(np.abs(entries - entries.conj().T)))
        if hermiticity > STATE_TOL:
            raise InvalidStateError(f"Matrix is not Hermitian (deviation {hermiticity:.3e})")
        trace = float(np.trace(entries).real)
        if abs(trace - 1.0) > STATE_TOL:
            raise InvalidStateError(f"Trace is {trace!r}, expected 1")
        lowest = float(linalg.eigvalsh(entries)[0])
        if lowest < -STATE_TOL:
            raise InvalidStateError(f"Negative eigenvalue {lowest:.3e}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.d * self.dprime

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        return linalg.eigvalsh(self.entries)

    def rank(self, tol: float = RANGE_TOL) -> int:
        return int(np.count_nonzero(self.eigenvalues() > tol))


def rho_perp(family: UebkFamily, tol: float = TOL_ORTH) -> DensityMatrix:
    """(I - sum_i |phi_i><phi_i|) / (dd' - m).

    Members within tol of orthonormal are orthonormalized first, so the
    result is a state even when the family is only approximately orthonormal.
    """
    basis = span_basis(family, tol)
    m = basis.dim
    if m >= basis.ambient_dim:
        raise EmptyComplementError(
            f"{family.params.label} spans all {basis.ambient_dim} dimensions; "
            f"there is no complementary state"
        )
    entries = np.eye(basis.ambient_dim, dtype=np.complex128) - basis.projector()
    entries /= basis.ambient_dim - m
    # hermitize away rounding in the outer-product sum
    entries = (entries + entries.conj().T) / 2
    return DensityMatrix(basis.d, basis.dprime, entries, origin=family.params)


def maximally_mixed(d: int, dprime: int) -> DensityMatrix:
    dim = d * dprime
    return DensityMatrix(d, dprime, np.eye(dim) / dim)


def range_basis(rho: DensityMatrix, tol: float = RANGE_TOL) -> SubspaceBasis:
    """Eigenvectors of rho whose eigenvalue exceeds tol."""
    values, vectors = linalg.eigh(rho.entries)
    keep = values > tol
    if not np.any(keep):
        raise ZeroStateError("Density matrix has no eigenvalue above the range tolerance")
    return SubspaceBasis.from_columns(rho.d, rho.dprime, vectors[:, keep])


@dataclass(frozen=True)
class RangeBound:
    k: int
    max_rank_observed: int
    below_k: bool
    trials: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "max_rank_observed": self.max_rank_observed,
            "below_k": self.below_k,
            "trials": self.trials,
            "seed": self.seed,
        }


def range_schmidt_bound(
    rho: DensityMatrix,
    k: int,
    trials: int = 32,
    seed: int = 42,
    tol_rank: float = TOL_RANK,
) -> RangeBound:
    """Largest Schmidt rank found in range(rho), compared against k."""
    observed = generic_max_schmidt_rank(range_basis(rho), trials, seed, tol_rank)
    return RangeBound(k=k, max_rank_observed=observed, below_k=observed < k,
                      trials=trials, seed=seed)


@dataclass
class StateReport:
    params: FamilyParams
    trace: float
    min_eigenvalue: float
    rank: int
    expected_rank: int
    max_eigenvalue_deviation: float
    idempotence_deviation: float
    complement_distance: float
    range_bound: RangeBound

    @property
    def certified(self) -> bool:
        return (
            abs(self.trace - 1.0) <= STATE_TOL
            and self.min_eigenvalue >= -STATE_TOL
            and self.rank == self.expected_rank
            and self.max_eigenvalue_deviation <= STATE_TOL
            and self.complement_distance <= RANGE_TOL
            and self.range_bound.below_k
        )

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "trace": self.trace,
            "min_eigenvalue": self.min_eigenvalue,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "max_eigenvalue_deviation": self.max_eigenvalue_deviation,
            "idempotence_deviation": self.idempotence_deviation,
            "complement_distance": self.complement_distance,
            "range_bound": self.range_bound.as_dict(),
            "certified": self.certified,
        }


def certify_rho_perp(
    family: UebkFamily,
    config: Optional[VerifyConfig] = None,
    k: Optional[int] = None,
) -> StateReport:
    """Build rho_perp and collect trace, spectrum and range evidence.

    The range is compared against `k`, the family's Schmidt number by default.
    """
    config = config or VerifyConfig()
    k = family.k if k is None else k
    rho = rho_perp(family, config.tol_orth)
    size = rho.dim - len(family.vectors)
    eigs = rho.eigenvalues()
    nonzero = eigs[eigs > RANGE_TOL]
    scaled = rho.entries * size
    report = StateReport(
        params=family.params,
        trace=rho.trace(),
        min_eigenvalue=float(eigs[0]),
        rank=int(nonzero.size),
        expected_rank=size,
        max_eigenvalue_deviation=float(np.max(np.abs(nonzero - 1.0 / size))) if nonzero.size else 1.0,
        idempotence_deviation=float(np.max(np.abs(scaled @ scaled - scaled))),
        complement_distance=projector_distance(range_basis(rho), complement_basis(family, config.tol_orth)),
        range_bound=range_schmidt_bound(rho, k, config.trials, config.seed, config.tol_rank),
    )
    if not report.certified:
        LOG.warning("rho_perp of %s is not certified: %s", family.params.label, report.as_dict())
    return report
