"""
Invariant verification suite.

Runs every exact finite-size property of the lab on one configuration and
collects the outcome of each check instead of stopping at the first failure:

- eigen quality: residuals and orthogonality of the decomposition
- completeness: every column of the center mass table sums to one
- overlap chain: ``grid sup <= Q(k, l) <= sum_n sqrt(S_n(k) S_n(l))`` on random pairs
- averaged chain: the same inequality on phase-averaged sample means
- unitarity and group law of the propagator
- summation lemma: closed form against brute force and the averaged overlap bound, d = 1, 2, 3
- resonant measure: Monte Carlo fraction against the analytic measure

Classes
-------
CheckResult
    Outcome of one check with its measured worst case.
Verdict
    All check results of a run.

Functions
---------
random_pairs(spec, count, seed)
    Seeded site pairs drawn from the inner window.
run_verification(spec, pairs, grid, plan, solver, workers, seed)
    Run the suite.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from dataclasses import dataclass, field

import numpy as np

from config.config import DEFAULTS, MAX_WORKERS, TOLERANCES
from config.logger import Logger
from scripts.arithmetic import empirical_resonant_fraction
from scripts.dynamics import TimeGrid, evolve, evolve_series
from scripts.eigensolve import EigenSystem, residual_report
from scripts.expectation import (PhasePlan, Solver, SpecTemplate, corollary_a_bound, default_solver,
                                 lattice_overlap_sum, run_ensemble, summation_lemma_bruteforce,
                                 summation_lemma_closed_form)
from scripts.hamiltonian import OperatorSpec, build
from scripts.localization import center_mass_profile, inner_window, overlap_sum, theorem_a_pointwise
from utils.errors import DomainError, InvariantViolation, LabError


LEMMA_GAMMAS = (0.1, 0.5, 1.0, 2.0)
LEMMA_DISTANCE = 100
LATTICE_DISTANCE = 30
MEASURE_CASES = ((1.0, 5), (1.0, 10), (0.5, 15))
MEASURE_SAMPLES = 100_000

log = Logger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "worst": self.worst, "detail": self.detail}


@dataclass
class Verdict:
    """
    Results of a verification run.

    Attributes
    ----------
    checks : list of CheckResult
        One entry per check, in execution order.
    """

    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[str]:
        return [f"{c.name}: {c.detail}" for c in self.checks if not c.passed]

    def add(self, check: CheckResult) -> None:
        (log.info if check.passed else log.error)(check.to_dict())
        self.checks.append(check)

    def raise_for_failures(self) -> None:
        if not self.passed:
            raise InvariantViolation(f"{len(self.failures)} invariant check(s) failed", self.failures)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks], "failures": self.failures}


def random_pairs(spec: OperatorSpec, count: int, seed: int = DEFAULTS.seed) -> list[tuple[int, int]]:
    lower, upper = inner_window(spec)
    sites = np.random.default_rng(seed).integers(lower, upper + 1, size=(count, 2))
    return [(int(k), int(l)) for k, l in sites]


def _eigen_quality(spec: OperatorSpec, eig: EigenSystem) -> CheckResult:
    report = residual_report(build(spec), eig)
    threshold = TOLERANCES.residual_factor * spec.norm_bound
    worst = max(report.max_residual, report.max_orthogonality_defect)
    return CheckResult("eigen_quality", report.acceptable(threshold), worst,
                       f"residual={report.max_residual:.3e} orthogonality={report.max_orthogonality_defect:.3e} "
                       f"threshold={threshold:.3e}")


def _completeness(eig: EigenSystem) -> CheckResult:
    totals = center_mass_profile(eig).mass.sum(axis=0)
    worst = float(np.max(np.abs(totals - 1.0)))
    return CheckResult("completeness", worst <= TOLERANCES.completeness, worst,
                       f"max |sum_n S_n(l) - 1| = {worst:.3e}")


def _overlap_chain(eig: EigenSystem, pairs, grid: TimeGrid) -> CheckResult:
    profile = center_mass_profile(eig)
    worst, broken = -math.inf, []
    for k, l in pairs:
        try:
            report = theorem_a_pointwise(eig, k, l, grid, profile)
        except InvariantViolation as error:
            broken.append(str(error))
            continue
        worst = max(worst, report.lhs_sup - report.middle, report.middle - report.rhs)
    if broken:
        return CheckResult("overlap_chain", False, math.inf, f"{len(broken)} pair(s) failed; first: {broken[0]}")
    return CheckResult("overlap_chain", True, worst, f"{len(pairs)} pairs, largest excess {worst:.3e}")


def _averaged_chain(template: SpecTemplate, plan: PhasePlan, pairs, solver: Solver, workers: int) -> CheckResult:
    sites = sorted({site for pair in pairs for site in pair})

    def task(eig: EigenSystem):
        profile = center_mass_profile(eig)
        overlaps = np.array([overlap_sum(eig, k, l) for k, l in pairs])
        return overlaps, np.stack([profile.mass_column(site) for site in sites])

    results = run_ensemble(template, plan, task, solver, workers, desc="Averaged chain")
    mean_q = np.mean([r[0] for r in results], axis=0)
    mean_s = np.mean([r[1] for r in results], axis=0)
    row = {site: i for i, site in enumerate(sites)}
    bounds = np.array([np.sqrt(mean_s[row[k]] * mean_s[row[l]]).sum() for k, l in pairs])
    excess = float(np.max(mean_q - bounds))
    return CheckResult("averaged_chain", excess <= TOLERANCES.chain_slack, excess,
                       f"{len(pairs)} pairs over {plan.count} phases, largest excess {excess:.3e}")


def _unitarity(eig: EigenSystem, grid: TimeGrid, seed: int) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=eig.dimension) + 1j * rng.normal(size=eig.dimension)
    psi /= np.linalg.norm(psi)
    norms = np.linalg.norm(evolve_series(eig, psi, grid.times), axis=0)
    drift = float(np.max(np.abs(norms - 1.0)))

    group = 0.0
    for t1, t2 in rng.uniform(0.0, grid.t_max, size=(5, 2)):
        stepped = evolve(eig, evolve(eig, psi, t1), t2)
        group = max(group, float(np.linalg.norm(stepped - evolve(eig, psi, t1 + t2))))
    return [
        CheckResult("unitarity", drift <= TOLERANCES.unitarity, drift,
                    f"max norm drift {drift:.3e} over {grid.count} times"),
        CheckResult("group_law", group <= TOLERANCES.group_law, group, f"max deviation {group:.3e}"),
    ]


def _summation_lemma() -> list[CheckResult]:
    slack = TOLERANCES.lemma_tail
    worst_gap, worst_fit = -math.inf, 0.0
    for gamma in LEMMA_GAMMAS:
        for m in range(LEMMA_DISTANCE + 1):
            brute = summation_lemma_bruteforce(gamma, m)
            worst_gap = max(worst_gap, brute - corollary_a_bound(1.0, gamma, 1, m))
            worst_fit = max(worst_fit, abs(brute - summation_lemma_closed_form(gamma, m)) / brute)
    results = [
        CheckResult("summation_lemma_d1", worst_gap <= slack, worst_gap,
                    f"largest brute-force excess over the bound {worst_gap:.3e}"),
        CheckResult("summation_closed_form", worst_fit <= 1e-10, worst_fit,
                    f"largest relative closed-form error {worst_fit:.3e}"),
    ]

    for d in (2, 3):
        worst = -math.inf
        for gamma in LEMMA_GAMMAS:
            for dist in range(LATTICE_DISTANCE + 1):
                bound = corollary_a_bound(1.0, gamma, d, dist)
                # coordinate order does not change the separable sum
                for split in _partitions(dist, d):
                    worst = max(worst, (lattice_overlap_sum(gamma, split) - bound) / bound)
        results.append(CheckResult(f"summation_lemma_d{d}", worst <= slack, worst,
                                   f"largest relative excess over the committed constant {worst:.3e}"))
    return results


def _partitions(total: int, parts: int):
    """Nonincreasing tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _partitions(total - first, parts - 1):
            if rest[0] <= first:
                yield (first, *rest)


def _resonant_measure(alpha: float, seed: int) -> CheckResult:
    worst, detail = 0.0, []
    for eta, k in MEASURE_CASES:
        estimate = empirical_resonant_fraction(k, alpha, eta, MEASURE_SAMPLES, seed)
        z = abs(estimate.fraction - estimate.expected) / estimate.sigma if estimate.sigma > 0 else 0.0
        worst = max(worst, z)
        if not estimate.within(3.0):
            detail.append(f"(eta={eta}, k={k}): {estimate.fraction:.5f} vs {estimate.expected:.5f}")
    return CheckResult("resonant_measure", not detail, worst,
                       "; ".join(detail) or f"largest deviation {worst:.2f} sigma")


def run_verification(spec: OperatorSpec, pairs, grid: TimeGrid, plan: PhasePlan,
                     solver: Solver | None = None, workers: int = MAX_WORKERS,
                     seed: int = DEFAULTS.seed) -> Verdict:
    """
    Run every check of the suite.

    Parameters
    ----------
    spec : OperatorSpec
        Operator of the pointwise checks; its phase-free part drives the averaged check.
    pairs : list of (int, int)
        Site pairs in the inner window, at least one.
    grid : TimeGrid
        Times for the sup estimates and the unitarity check.
    plan : PhasePlan
        Phase sample of the averaged check.
    solver : callable, optional
        Eigensystem factory; a faulty one makes the eigen checks fail.
    workers : int, optional
        Thread pool size of the averaged check.
    seed : int, optional
        Seed of the random state and the Monte Carlo check.

    Returns
    -------
    Verdict
        Every check result. Checks that raise a lab error are recorded as failed.

    Raises
    ------
    DomainError
        If `pairs` is empty or leaves the inner window.
    """
    if not pairs:
        raise DomainError("verification needs at least one pair")
    lower, upper = inner_window(spec)
    outside = [pair for pair in pairs if not all(lower <= site <= upper for site in pair)]
    if outside:
        raise DomainError(f"pairs {outside} leave the inner window [{lower}, {upper}]")

    solver = solver or default_solver()
    template = SpecTemplate(lam=spec.lam, alpha=spec.alpha, n_min=spec.n_min, n_max=spec.n_max)
    log.info({"event": "verify", "spec": spec.to_dict(), "pairs": len(pairs), "grid": (grid.t_max, grid.count),
              "phases": plan.count})

    verdict = Verdict()
    eig = solver(spec)
    stages = [
        lambda: [_eigen_quality(spec, eig)],
        lambda: [_completeness(eig)],
        lambda: [_overlap_chain(eig, pairs, grid)],
        lambda: [_averaged_chain(template, plan, pairs, solver, workers)],
        lambda: _unitarity(eig, grid, seed),
        _summation_lemma,
        lambda: [_resonant_measure(spec.alpha, seed)],
    ]
    for index, stage in enumerate(stages):
        try:
            for check in stage():
                verdict.add(check)
        except LabError as error:
            verdict.add(CheckResult(f"stage_{index}", False, math.inf, str(error)))
    return verdict


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
