"""
Phase averages over theta in [0, 1) and the summation bounds built on them.

An ensemble fixes everything but the phase (`SpecTemplate`), draws phases from a
`PhasePlan`, decomposes one operator per phase on a thread pool and reduces the
per-phase values in sample order, so results do not depend on the worker count.
Resonant phases are never trimmed.

Classes
-------
Strategy
    Phase sampling strategies.
PhasePlan
    Count, strategy and seed of a phase sample.
SpecTemplate
    Operator parameters without the phase.
Quantity
    Kinds of averaged quantities.
ExpectationRecord
    Sample mean and standard error of one averaged quantity.
PhaseProfile
    Averaged overlap sums and center masses around an origin.
EdlReport
    Averaged certified sup bounds over site pairs with their decay fit.

Functions
---------
sample_phases(plan)
    The phases of a plan.
default_solver(backend), planted_solver(rate), corrupted_solver(solver)
    Per-phase eigensystem factories.
phase_profile(template, plan, origin, sites)
    One ensemble pass producing overlap sums and center masses.
expected_center_mass(template, plan, n, l)
    Average of S_n(l).
expected_overlap_sum(template, plan, k, l)
    Average of Q(k, l) with the regrouped bound of the averaged chain.
gamma_hat(template, plan, k_list)
    Decay rate of the averaged overlap sum.
corollary_a_bound(C, gamma, d, dist)
    Closed-form bound on the averaged overlap.
summation_lemma_closed_form(gamma, m), summation_lemma_bruteforce(gamma, m)
    The one-dimensional sum ``sum_n exp(-gamma (|n| + |n - m|))``.
lattice_overlap_sum(gamma, displacement, C)
    The same sum on Z^d with the l1 norm.
edl_check(template, plan, pairs)
    Averaged certified sup bounds and their exponential fit.
two_term_check(records)
    Two-term fit of averaged center masses.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from tqdm import tqdm

from config.config import DEFAULTS, MAX_WORKERS, TOLERANCES
from config.logger import Logger
from scripts.dynamics import TimeGrid, sup_overlap
from scripts.eigensolve import EigenSystem, eigh_tridiagonal
from scripts.hamiltonian import OperatorSpec, build
from scripts.localization import (DecayFit, TwoTermFit, center_mass_profile, decay_fit, inner_window,
                                  overlap_sum, two_term_fit)
from utils.errors import DomainError, InsufficientDataError, LabError, PhaseFailure


Solver = Callable[[OperatorSpec], EigenSystem]

log = Logger(__name__)


class Strategy(str, Enum):
    MIDPOINT = "midpoint-grid"
    JITTERED = "jittered-grid"
    UNIFORM = "uniform-random"


class Quantity(str, Enum):
    CENTER_MASS = "center_mass"
    OVERLAP_SUM = "overlap_sum"
    SUP_OVERLAP_GRID = "sup_overlap_grid"


@dataclass(frozen=True)
class PhasePlan:
    """
    Phase sample definition; the sample is a deterministic function of all three fields.

    Attributes
    ----------
    count : int
        M >= 1.
    strategy : Strategy
        Midpoint grid, jittered grid or iid uniform.
    seed : int
        Generator seed (unused by the midpoint grid).
    """

    count: int
    strategy: Strategy = Strategy.JITTERED
    seed: int = DEFAULTS.seed

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"phase count must be >= 1, got {self.count}")
        try:
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        except ValueError as error:
            raise DomainError(f"unknown phase strategy {self.strategy!r}") from error

    def to_dict(self) -> dict:
        return {"count": self.count, "strategy": self.strategy.value, "seed": self.seed}


@dataclass(frozen=True)
class SpecTemplate:
    """`OperatorSpec` without the phase."""

    lam: float
    alpha: float
    n_min: int
    n_max: int

    def __post_init__(self):
        self.at(0.0)

    @classmethod
    def symmetric(cls, lam: float, alpha: float, radius: int) -> "SpecTemplate":
        return cls(lam=lam, alpha=alpha, n_min=-radius, n_max=radius)

    def at(self, theta: float) -> OperatorSpec:
        return OperatorSpec(lam=self.lam, alpha=self.alpha, theta=theta, n_min=self.n_min, n_max=self.n_max)

    @property
    def inner_window(self) -> tuple[int, int]:
        return inner_window(self.at(0.0))

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "alpha": self.alpha, "n_min": self.n_min, "n_max": self.n_max}


@dataclass(frozen=True)
class ExpectationRecord:
    """
    Phase average of one quantity.

    Attributes
    ----------
    quantity : Quantity
        What was averaged.
    sites : tuple of int
        (k, l) for overlaps, (n, l) for center masses.
    mean : float
        Sample mean.
    std_error : float
        Sample standard deviation / sqrt(M); 0 for M = 1.
    count : int
        M.
    template : dict
        The operator template.
    bound : float or None
        For overlap sums: ``sum_n sqrt(E S_n(k) E S_n(l))``.
    """

    quantity: Quantity
    sites: tuple[int, int]
    mean: float
    std_error: float
    count: int
    template: dict
    bound: float | None = None

    @property
    def distance(self) -> int:
        return abs(self.sites[0] - self.sites[1])

    def to_row(self) -> dict:
        row = {"quantity": self.quantity.value, "site_a": self.sites[0], "site_b": self.sites[1],
               "distance": self.distance, "mean": self.mean, "std_error": self.std_error, "count": self.count}
        if self.bound is not None:
            row["bound"] = self.bound
        return row


@dataclass(frozen=True)
class PhaseProfile:
    origin: int
    overlap: list[ExpectationRecord]
    center_mass: list[ExpectationRecord]


@dataclass(frozen=True)
class EdlReport:
    """
    Averaged certified sup bounds over site pairs.

    `passed` is True when the exponential fit across distances has a positive rate;
    `fit` and `passed` are None when there were too few distances to fit.
    """

    certified: list[ExpectationRecord]
    grid_sup: list[ExpectationRecord]
    fit: DecayFit | None
    passed: bool | None = field(default=False)


def sample_phases(plan: PhasePlan) -> np.ndarray:
    """
    Phases of a plan, all in [0, 1).

    Examples
    --------
    >>> sample_phases(PhasePlan(4, Strategy.MIDPOINT)).tolist()
    [0.125, 0.375, 0.625, 0.875]
    """
    m = plan.count
    cells = (np.arange(m) + 0.5) / m
    if plan.strategy is Strategy.MIDPOINT:
        return cells
    rng = np.random.default_rng(plan.seed)
    if plan.strategy is Strategy.JITTERED:
        return (cells + rng.uniform(-0.5 / m, 0.5 / m, size=m)) % 1.0
    return rng.random(m)


def default_solver(backend: str | None = None) -> Solver:
    def solve(spec: OperatorSpec) -> EigenSystem:
        return eigh_tridiagonal(build(spec), backend)
    return solve


def planted_eigensystem(spec: OperatorSpec, rate: float, center: int = 0) -> EigenSystem:
    """
    Synthetic orthonormal basis with a planted exponential profile.

    The basis is the Householder reflection exchanging the unit vector at `center`
    with the normalized profile ``exp(-rate |n - center|)``. Every column then decays
    at `rate` away from `center`, so ``Q(center, k)`` is proportional to
    ``exp(-rate |k - center|)`` up to ``exp(-2 rate |k - center|)`` corrections.
    Eigenvalues are the sorted potential of `spec`; they carry no meaning here.
    """
    if not rate > 0:
        raise DomainError(f"planted rate must be positive, got {rate}")
    sites = spec.sites
    profile = np.exp(-rate * np.abs(sites - center))
    profile /= np.linalg.norm(profile)
    unit = np.zeros_like(profile)
    unit[center - spec.n_min] = 1.0
    u = unit - profile
    u /= np.linalg.norm(u)
    vectors = np.eye(sites.shape[0]) - 2.0 * np.outer(u, u)
    values = np.sort(build(spec).diagonal)
    return EigenSystem(values=values, vectors=vectors, spec=spec)


def planted_solver(rate: float, center: int = 0) -> Solver:
    def solve(spec: OperatorSpec) -> EigenSystem:
        return planted_eigensystem(spec, rate, center)
    return solve


def corrupted_solver(solver: Solver | None = None, column: int = 0, size: float = 1e-3) -> Solver:
    """Fault injection: add `size` to every entry of one eigenvector."""
    solver = solver or default_solver()

    def solve(spec: OperatorSpec) -> EigenSystem:
        eig = solver(spec)
        vectors = eig.vectors.copy()
        vectors[:, column % vectors.shape[1]] += size
        return replace(eig, vectors=vectors)
    return solve


def _mean_and_error(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.shape[0]))


def _check_inner(template: SpecTemplate, *sites: int) -> None:
    lower, upper = template.inner_window
    for site in sites:
        if not lower <= site <= upper:
            raise DomainError(f"site {site} outside the inner window [{lower}, {upper}]")


def run_ensemble(template: SpecTemplate, plan: PhasePlan, task: Callable[[EigenSystem], object],
                 solver: Solver | None = None, workers: int = MAX_WORKERS, desc: str = "Phases") -> list:
    """
    Evaluate ``task(solver(template.at(theta)))`` for every phase of `plan`.

    Results come back in sample order. The first failing phase (in sample order)
    is re-raised as a `PhaseFailure` once all submitted work has finished.
    """
    solver = solver or default_solver()
    thetas = sample_phases(plan)
    results: list = [None] * thetas.shape[0]
    failures: dict[int, Exception] = {}

    def work(index: int):
        return task(solver(template.at(float(thetas[index]))))

    with ThreadPoolExecutor(max_workers=max(1, int(workers))) as executor:
        futures = {executor.submit(work, idx): idx for idx in range(thetas.shape[0])}
        for future in tqdm(as_completed(futures), total=len(futures), desc=desc, unit="phase",
                           disable=len(futures) < 2):
            idx = futures[future]
            try:
                results[idx] = future.result()
            except (LabError, ArithmeticError, ValueError, np.linalg.LinAlgError) as error:
                failures[idx] = error

    if failures:
        first = min(failures)
        log.error(f"{len(failures)} phase(s) failed; first at theta={thetas[first]!r}")
        raise PhaseFailure(float(thetas[first]), failures[first])
    return results


def phase_profile(template: SpecTemplate, plan: PhasePlan, origin: int, sites: Sequence[int],
                  solver: Solver | None = None, workers: int = MAX_WORKERS) -> PhaseProfile:
    """
    Averages of ``Q(origin, l)`` and ``S_origin(l)`` for every l in `sites`.

    Parameters
    ----------
    template : SpecTemplate
        Operator without the phase.
    plan : PhasePlan
        Phase sample.
    origin : int
        Reference site (inner window).
    sites : sequence of int
        Sites l (inner window).
    solver : callable, optional
        Per-phase eigensystem factory.
    workers : int, optional
        Thread pool size.

    Returns
    -------
    PhaseProfile
        One record per site for each quantity, in the order of `sites`.
    """
    sites = [int(site) for site in sites]
    _check_inner(template, origin, *sites)
    log.info({"event": "phase_profile", "template": template.to_dict(), "plan": plan.to_dict(),
              "origin": origin, "sites": len(sites)})

    def task(eig: EigenSystem):
        profile = center_mass_profile(eig)
        row = np.abs(eig.row(origin))
        overlaps = np.array([row @ np.abs(eig.row(site)) for site in sites])
        masses = np.array([profile.mass_at(origin, site) for site in sites])
        return overlaps, masses

    results = run_ensemble(template, plan, task, solver, workers, desc="Phase profile")
    overlaps = np.array([r[0] for r in results])
    masses = np.array([r[1] for r in results])
    info = template.to_dict()
    overlap_records, mass_records = [], []
    for j, site in enumerate(sites):
        mean, se = _mean_and_error(overlaps[:, j])
        overlap_records.append(ExpectationRecord(Quantity.OVERLAP_SUM, (origin, site), mean, se, plan.count, info))
        mean, se = _mean_and_error(masses[:, j])
        mass_records.append(ExpectationRecord(Quantity.CENTER_MASS, (origin, site), mean, se, plan.count, info))
    return PhaseProfile(origin=origin, overlap=overlap_records, center_mass=mass_records)


def expected_center_mass(template: SpecTemplate, plan: PhasePlan, n: int, l: int,
                         solver: Solver | None = None, workers: int = MAX_WORKERS) -> ExpectationRecord:
    """
    Phase average of ``S_n(l) = sum_{n_s = n} |phi_s(l)|**2`` with its standard error.
    """
    _check_inner(template, n, l)
    values = run_ensemble(template, plan, lambda eig: center_mass_profile(eig).mass_at(n, l), solver, workers,
                          desc="Center mass")
    mean, se = _mean_and_error(np.array(values))
    return ExpectationRecord(Quantity.CENTER_MASS, (int(n), int(l)), mean, se, plan.count, template.to_dict())


def expected_overlap_sum(template: SpecTemplate, plan: PhasePlan, k: int, l: int,
                         solver: Solver | None = None, workers: int = MAX_WORKERS) -> ExpectationRecord:
    """
    Phase average of ``Q(k, l)`` and the regrouped bound ``sum_n sqrt(E S_n(k) E S_n(l))``.

    On sample means ``mean <= bound`` holds exactly (Cauchy-Schwarz on the empirical
    measure), so the recorded bound is a direct check of the averaged chain.
    """
    _check_inner(template, k, l)

    def task(eig: EigenSystem):
        profile = center_mass_profile(eig)
        return overlap_sum(eig, k, l), profile.mass_column(k).copy(), profile.mass_column(l).copy()

    results = run_ensemble(template, plan, task, solver, workers, desc="Overlap sum")
    mean, se = _mean_and_error(np.array([r[0] for r in results]))
    mass_k = np.mean([r[1] for r in results], axis=0)
    mass_l = np.mean([r[2] for r in results], axis=0)
    bound = float(np.sqrt(mass_k * mass_l).sum())
    return ExpectationRecord(Quantity.OVERLAP_SUM, (int(k), int(l)), mean, se, plan.count,
                             template.to_dict(), bound=bound)


def profile_points(records: Sequence[ExpectationRecord]) -> list[tuple[int, float]]:
    return [(record.distance, record.mean) for record in records]


def gamma_hat(template: SpecTemplate, plan: PhasePlan, k_list: Sequence[int], origin: int = 0,
              solver: Solver | None = None, workers: int = MAX_WORKERS) -> DecayFit:
    """
    Decay rate of ``E Q(origin, origin + k)`` over `k_list`.

    The liminf defining the rate is approximated by the regression slope over the
    finite window; the pointwise minimum rate is reported alongside.

    Raises
    ------
    InsufficientDataError
        With fewer than ``DEFAULTS.min_fit_points`` entries in `k_list`.
    """
    if len(k_list) < DEFAULTS.min_fit_points:
        raise InsufficientDataError(f"gamma estimation needs >= {DEFAULTS.min_fit_points} distances")
    profile = phase_profile(template, plan, origin, [origin + int(k) for k in k_list], solver, workers)
    return decay_fit(profile_points(profile.overlap))


def committed_constant(C: float, gamma: float, d: int) -> float:
    """``C (1 + 2 / (1 - exp(-gamma)))**d``, the explicit constant used for d > 1."""
    return C * (1.0 + 2.0 / (1.0 - math.exp(-gamma))) ** d


def corollary_a_bound(C: float, gamma: float, d: int, dist: int) -> float:
    """
    Bound on the averaged overlap implied by ``E S_n(l) <= C exp(-2 gamma |n - l|)``.

    ``C ((1 + gamma) / gamma + m) exp(-gamma m)`` for d = 1 and
    ``C1 (1 + m**(d-1)) exp(-gamma m)`` with ``C1 = committed_constant(C, gamma, d)``
    for d > 1, where m is the distance.

    Raises
    ------
    DomainError
        If gamma <= 0, C <= 0, d < 1 or the distance is negative.

    Examples
    --------
    >>> corollary_a_bound(1.0, 1.0, 1, 0)
    2.0
    """
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if not C > 0:
        raise DomainError(f"C must be positive, got {C}")
    if d < 1 or dist < 0:
        raise DomainError(f"need d >= 1 and dist >= 0, got d={d}, dist={dist}")
    decay = math.exp(-gamma * dist)
    if d == 1:
        return C * ((1.0 + gamma) / gamma + dist) * decay
    return committed_constant(C, gamma, d) * (1.0 + dist ** (d - 1)) * decay


def summation_lemma_closed_form(gamma: float, m: int) -> float:
    """``sum_n exp(-gamma (|n| + |n - m|)) = exp(-gamma m) (m + 1 + 2q / (1 - q))``, ``q = exp(-2 gamma)``."""
    m = abs(int(m))
    q = math.exp(-2.0 * gamma)
    return math.exp(-gamma * m) * (m + 1 + 2.0 * q / (1.0 - q))


def summation_lemma_bruteforce(gamma: float, m: int, tail: float = TOLERANCES.lemma_tail) -> float:
    """
    Truncated direct sum of ``exp(-gamma (|n| + |n - m|))`` with tail below `tail`.

    Outside ``[0, m]`` the summand is geometric with ratio ``exp(-2 gamma)`` on each
    side, which fixes the truncation radius.
    """
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    m = abs(int(m))
    ratio = math.exp(-2.0 * gamma)
    extra = max(1, math.ceil(math.log(tail * (1.0 - ratio) / 2.0) / (-2.0 * gamma)))
    n = np.arange(-extra, m + extra + 1, dtype=np.float64)
    return float(np.sum(np.exp(-gamma * (np.abs(n) + np.abs(n - m)))))


def lattice_overlap_sum(gamma: float, displacement: Sequence[int], C: float = 1.0,
                        tail: float = TOLERANCES.lemma_tail) -> float:
    """
    ``C sum_{n in Z^d} exp(-gamma (|n - k|_1 + |n - l|_1))`` for ``k - l = displacement``.

    With the l1 norm the lattice sum factorizes over coordinates into truncated
    one-dimensional sums.
    """
    return C * math.prod(summation_lemma_bruteforce(gamma, int(m), tail / max(1, len(displacement)))
                         for m in displacement)


def edl_check(template: SpecTemplate, plan: PhasePlan, pairs: Sequence[tuple[int, int]],
              grid: TimeGrid | None = None, solver: Solver | None = None,
              workers: int = MAX_WORKERS) -> EdlReport:
    """
    Average the certified sup bound ``Q(k, l)`` over phases for each pair and fit its decay.

    Parameters
    ----------
    template : SpecTemplate
        Operator without the phase.
    plan : PhasePlan
        Phase sample.
    pairs : sequence of (int, int)
        Site pairs in the inner window. The decay fit needs five distinct distances.
    grid : TimeGrid, optional
        When given, the grid maximum of the overlap modulus is averaged as well.
    solver : callable, optional
        Per-phase eigensystem factory.
    workers : int, optional
        Thread pool size.

    Returns
    -------
    EdlReport
        Records per pair, the fit across distances and whether the fitted rate is positive.
        `fit` and `passed` are None when the pairs cover too few distinct distances.
    """
    pairs = [(int(k), int(l)) for k, l in pairs]
    if not pairs:
        raise DomainError("edl_check needs at least one pair")
    for k, l in pairs:
        _check_inner(template, k, l)

    def task(eig: EigenSystem):
        certified = np.array([overlap_sum(eig, k, l) for k, l in pairs])
        if grid is None:
            return certified, None
        return certified, np.array([sup_overlap(eig, k, l, grid).grid_max for k, l in pairs])

    results = run_ensemble(template, plan, task, solver, workers, desc="EDL check")
    info = template.to_dict()
    certified = np.array([r[0] for r in results])
    certified_records, sup_records = [], []
    for j, pair in enumerate(pairs):
        mean, se = _mean_and_error(certified[:, j])
        certified_records.append(ExpectationRecord(Quantity.OVERLAP_SUM, pair, mean, se, plan.count, info))
    if grid is not None:
        sups = np.array([r[1] for r in results])
        for j, pair in enumerate(pairs):
            mean, se = _mean_and_error(sups[:, j])
            sup_records.append(ExpectationRecord(Quantity.SUP_OVERLAP_GRID, pair, mean, se, plan.count, info))

    try:
        fit = decay_fit(profile_points(certified_records))
    except InsufficientDataError as error:
        log.warning({"event": "edl_fit_skipped", "pairs": len(pairs), "reason": str(error)})
        return EdlReport(certified=certified_records, grid_sup=sup_records, fit=None, passed=None)
    return EdlReport(certified=certified_records, grid_sup=sup_records, fit=fit, passed=fit.gamma_hat > 0)


def two_term_check(records: Sequence[ExpectationRecord]) -> TwoTermFit:
    """Two-term fit of averaged center masses against their distance."""
    return two_term_fit(profile_points(records))


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
