"""
Exhaustive construct-and-verify runs over every admissible parameter tuple.
"""
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, Iterator, List, Optional

from uebk.config import VerifyConfig, get_logger
from uebk.constructions import Convention, FamilyParams, build_family, enumerate_families
from uebk.mixed_state import StateReport, certify_rho_perp
from uebk.serialize import save_report, save_state
from uebk.verification import VerificationReport, verify_family

LOG = get_logger()


def dimension_tuples(max_dprime: int, include_umeb: bool = False) -> Iterator[tuple]:
    """(d, d', k, umeb) with 2 <= k < d <= d' <= max_dprime, plus k = d < d' if asked."""
    for dprime in range(3, max_dprime + 1):
        for d in range(3, dprime + 1):
            for k in range(2, d):
                yield d, dprime, k, False
    if include_umeb:
        for dprime in range(3, max_dprime + 1):
            for d in range(2, dprime):
                yield d, dprime, d, True


def sweep_params(
    max_dprime: int,
    convention: Convention = Convention.REPAIRED,
    include_umeb: bool = False,
) -> List[FamilyParams]:
    found: List[FamilyParams] = []
    for d, dprime, k, umeb in dimension_tuples(max_dprime, include_umeb):
        found.extend(enumerate_families(d, dprime, k, convention=convention, umeb=umeb))
    return found


@dataclass
class SweepResult:
    params: FamilyParams
    report: VerificationReport
    state: Optional[StateReport] = None

    @property
    def passed(self) -> bool:
        return self.report.passed and (self.state is None or self.state.certified)


def run_one(params: FamilyParams, config: VerifyConfig) -> SweepResult:
    family = build_family(params)
    report = verify_family(family, config)
    state = certify_rho_perp(family, config) if report.passed else None
    return SweepResult(params=params, report=report, state=state)


def _run_packed(job) -> SweepResult:
    return run_one(*job)


@dataclass
class SweepSummary:
    results: Dict[str, SweepResult] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def failures(self) -> List[SweepResult]:
        return [r for r in self.ordered() if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def ordered(self) -> List[SweepResult]:
        return sorted(self.results.values(), key=lambda r: r.params.sort_key())


def run_sweep(
    max_dprime: int = 10,
    config: Optional[VerifyConfig] = None,
    workers: int = 1,
    report_dir: Optional[Path] = None,
    convention: Convention = Convention.REPAIRED,
    include_umeb: bool = False,
) -> SweepSummary:
    """Verify every enumerated family; results are keyed by the parameter tag."""
    config = config or VerifyConfig()
    jobs = [(p, config) for p in sweep_params(max_dprime, convention, include_umeb)]
    LOG.info("Sweeping %s families up to d'=%s with %s worker(s)...",
             len(jobs), max_dprime, workers)
    summary = SweepSummary()
    if workers > 1:
        with Pool(workers) as pool:
            results = list(pool.imap_unordered(_run_packed, jobs))
    else:
        results = [_run_packed(job) for job in jobs]

    for result in results:
        tag = result.params.tag
        if tag in summary.results:
            raise RuntimeError(f"Duplicate sweep tuple {tag}")
        summary.results[tag] = result
        if report_dir is not None:
            save_report(result.report, Path(report_dir) / f"{tag}.json")
            if result.state is not None:
                save_state(result.state, Path(report_dir) / f"{tag}.rho.json")

    LOG.info("Sweep finished: %s/%s passed", summary.total - len(summary.failures), summary.total)
    return summary
