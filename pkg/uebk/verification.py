"""
Certify the claimed properties of a constructed family.

Unextendibility is checked two ways: a seeded random sampling of the
maximum Schmidt rank over the orthocomplement (generic elements attain it),
and a structural bound read off the complement's row/column support.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from uebk.config import TOL_ORTH, TOL_RANK, VerifyConfig, get_logger
from uebk.constructions import Family, FamilyParams, UebkFamily
from uebk.tensor import (
    NotOrthonormalError,
    SubspaceBasis,
    combine,
    matricize,
    max_gram_deviation,
    projector_distance,
    random_coefficients,
    schmidt_rank,
    singular_values,
)

LOG = get_logger()


@dataclass(frozen=True)
class RowGroup:
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]


@dataclass(frozen=True)
class ComplementSupport:
    """Rows and columns touched by a subspace, with rows grouped by column pattern."""

    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    row_groups: Tuple[RowGroup, ...]


def span_basis(family: UebkFamily, tol: float = TOL_ORTH) -> SubspaceBasis:
    """The family itself as a SubspaceBasis; requires orthonormal members."""
    deviation = max_gram_deviation(family.vectors)
    if deviation > tol:
        raise NotOrthonormalError(
            f"{family.params.label} is not orthonormal: max Gram deviation {deviation:.3e}"
        )
    return SubspaceBasis(family.params.d, family.params.dprime, family.vectors, tol)


def complement_basis(family: UebkFamily, tol: float = TOL_ORTH) -> SubspaceBasis:
    """Orthonormal basis of the orthocomplement of span(family).

    The coordinate vectors are projected with I - P, P the projector onto the
    QR-orthonormalized members, and the result is orthonormalized by QR with
    column pivoting; diagonal entries of R at or below tol mark the end of the
    column space.
    """
    basis = span_basis(family, tol)
    d, dprime = basis.d, basis.dprime
    projector = np.eye(basis.ambient_dim, dtype=np.complex128) - basis.projector()
    q_mat, r_mat, _ = linalg.qr(projector, pivoting=True)
    diag = np.abs(np.diag(r_mat))
    dim = int(np.count_nonzero(diag > tol))
    LOG.debug("Complement of %s has dimension %s", family.params.label, dim)
    return SubspaceBasis.from_columns(d, dprime, q_mat[:, :dim], tol)


def complement_support(basis: SubspaceBasis, tol: float = TOL_ORTH) -> ComplementSupport:
    """Which (row, column) cells any basis vector reaches above tol."""
    touched = np.zeros((basis.d, basis.dprime), dtype=bool)
    for v in basis.vectors:
        touched |= np.abs(matricize(v)) > tol
    rows = tuple(int(i) for i in np.flatnonzero(touched.any(axis=1)))
    cols = tuple(int(j) for j in np.flatnonzero(touched.any(axis=0)))
    groups: Dict[Tuple[int, ...], List[int]] = {}
    for i in rows:
        signature = tuple(int(j) for j in np.flatnonzero(touched[i]))
        groups.setdefault(signature, []).append(i)
    row_groups = tuple(
        RowGroup(rows=tuple(members), cols=signature)
        for signature, members in sorted(groups.items(), key=lambda item: item[1][0])
    )
    return ComplementSupport(rows=rows, cols=cols, row_groups=row_groups)


def structural_rank_bound(support: ComplementSupport, basis: SubspaceBasis) -> int:
    """Upper bound on the Schmidt rank of every vector of the subspace.

    rank(M) <= sum over row groups of the rank of M restricted to that group,
    and each such block is at most min(#rows, #cols).
    """
    if basis.dim == 0:
        return 0
    grouped = sum(min(len(g.rows), len(g.cols)) for g in support.row_groups)
    return min(len(support.cols), len(support.rows), grouped)


def generic_max_schmidt_rank(
    basis: SubspaceBasis,
    trials: int = 32,
    seed: int = 42,
    tol_rank: float = TOL_RANK,
) -> int:
    """Largest Schmidt rank seen over `trials` random elements of the span.

    One generator stream feeds every trial, so raising `trials` only adds
    samples and the result never decreases.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if basis.dim == 0:
        return 0
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        v = combine(basis, random_coefficients(rng, basis.dim))
        best = max(best, schmidt_rank(v.scaled(1.0 / v.norm()), tol_rank))
        if best == min(basis.d, basis.dprime):
            break
    return best


def expected_counts(params: FamilyParams) -> Tuple[int, int]:
    """(member count, complement dimension) from the closed-form formulas."""
    count = params.expected_count
    return count, params.ambient_dim - count


def printed_complement_support(
    params: FamilyParams,
) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Complement support as the published proofs write it, if they do."""
    d, dprime, k = params.d, params.dprime, params.k
    all_rows, all_cols = tuple(range(d)), tuple(range(dprime))
    if params.family is Family.PROP1:
        return all_rows, tuple(range(params.t * k, dprime))
    if params.family is Family.PROP2:
        return all_rows, all_cols
    if params.family is Family.PROP3:
        return tuple(range(params.r_d)), all_cols
    if params.family is Family.PROP5:
        return all_rows, tuple(range(params.q))
    return None


def span_distance(a: UebkFamily, b: UebkFamily, tol: float = TOL_ORTH) -> float:
    """Projector distance between the spans of two orthonormal families."""
    return projector_distance(span_basis(a, tol), span_basis(b, tol))


@dataclass
class VerificationReport:
    """Evidence for each defining property of an unextendible basis."""

    params: FamilyParams
    tol_orth: float
    tol_rank: float
    trials: int
    seed: int
    expected_count: int
    actual_count: int
    count_ok: bool
    max_gram_deviation: float
    orthonormal_ok: bool
    schmidt_ranks: List[int]
    max_singular_deviation: float
    schmidt_ok: bool
    complement_dim: Optional[int] = None
    generic_max_rank: Optional[int] = None
    structural_bound: Optional[int] = None
    certificate_bound: Optional[int] = None
    complement_rows: Optional[List[int]] = None
    complement_cols: Optional[List[int]] = None
    printed_rows: Optional[List[int]] = None
    printed_cols: Optional[List[int]] = None
    support_matches_printed: Optional[bool] = None
    unextendible_ok: bool = False
    failed_checks: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failed_checks

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "tolerances": {"tol_orth": self.tol_orth, "tol_rank": self.tol_rank},
            "sampling": {"trials": self.trials, "seed": self.seed},
            "count": {
                "ok": self.count_ok,
                "expected": self.expected_count,
                "actual": self.actual_count,
            },
            "orthonormal": {
                "ok": self.orthonormal_ok,
                "max_gram_deviation": self.max_gram_deviation,
            },
            "schmidt": {
                "ok": self.schmidt_ok,
                "ranks": list(self.schmidt_ranks),
                "max_singular_deviation": self.max_singular_deviation,
            },
            "complement": {
                "dim": self.complement_dim,
                "generic_max_rank": self.generic_max_rank,
                "structural_bound": self.structural_bound,
                "certificate_bound": self.certificate_bound,
                "rows": self.complement_rows,
                "cols": self.complement_cols,
                "printed_rows": self.printed_rows,
                "printed_cols": self.printed_cols,
                "support_matches_printed": self.support_matches_printed,
            },
            "unextendible_ok": self.unextendible_ok,
            "failed_checks": list(self.failed_checks),
            "verdict": self.verdict,
        }


def _schmidt_evidence(family: UebkFamily, tol_rank: float) -> Tuple[List[int], float]:
    k = family.k
    target = 1.0 / np.sqrt(k)
    ranks, worst = [], 0.0
    for v in family.vectors:
        if v.norm() < tol_rank:
            ranks.append(0)
            worst = max(worst, target)
            continue
        ranks.append(schmidt_rank(v, tol_rank))
        values = singular_values(matricize(v))
        expected = np.zeros_like(values)
        expected[:k] = target
        worst = max(worst, float(np.max(np.abs(values - expected))))
    return ranks, worst


def verify_family(family: UebkFamily, config: Optional[VerifyConfig] = None) -> VerificationReport:
    """Run every check in order and collect the evidence; never raises on a failed check."""
    config = config or VerifyConfig()
    params, k = family.params, family.k

    expected = params.expected_count
    actual = len(family.vectors)
    deviation = max_gram_deviation(family.vectors) if actual else 0.0
    ranks, sv_deviation = _schmidt_evidence(family, config.tol_rank)

    report = VerificationReport(
        params=params,
        tol_orth=config.tol_orth,
        tol_rank=config.tol_rank,
        trials=config.trials,
        seed=config.seed,
        expected_count=expected,
        actual_count=actual,
        count_ok=actual == expected,
        max_gram_deviation=deviation,
        orthonormal_ok=deviation <= config.tol_orth,
        schmidt_ranks=ranks,
        max_singular_deviation=sv_deviation,
        schmidt_ok=all(r == k for r in ranks) and sv_deviation <= config.tol_orth,
    )
    if not report.count_ok:
        report.failed_checks.append("count")
    if not report.orthonormal_ok:
        report.failed_checks.append("orthonormal")
    if not report.schmidt_ok:
        report.failed_checks.append("schmidt")

    if report.orthonormal_ok and actual:
        complement = complement_basis(family, config.tol_orth)
        support = complement_support(complement, config.tol_orth)
        report.complement_dim = complement.dim
        report.generic_max_rank = generic_max_schmidt_rank(
            complement, config.trials, config.seed, config.tol_rank
        )
        report.structural_bound = structural_rank_bound(support, complement)
        if report.structural_bound < k:
            report.certificate_bound = report.structural_bound
        report.complement_rows = list(support.rows)
        report.complement_cols = list(support.cols)
        printed = printed_complement_support(params)
        if printed is not None:
            report.printed_rows, report.printed_cols = list(printed[0]), list(printed[1])
            report.support_matches_printed = (
                tuple(support.rows) == printed[0] and tuple(support.cols) == printed[1]
            )
            if not report.support_matches_printed:
                LOG.info(
                    "%s: complement support rows %s x cols %s differs from the printed "
                    "form rows %s x cols %s",
                    params.label, support.rows, support.cols, printed[0], printed[1],
                )
        report.unextendible_ok = 0 < complement.dim and report.generic_max_rank < k

    if not report.unextendible_ok:
        report.failed_checks.append("unextendible")

    if report.passed:
        LOG.debug("%s at (%s, %s, %s): PASS", params.label, params.d, params.dprime, k)
    else:
        LOG.warning(
            "%s at (%s, %s, %s): FAIL on %s",
            params.label, params.d, params.dprime, k, ", ".join(report.failed_checks),
        )
    return report
