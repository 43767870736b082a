"""
Localization centers, center mass profiles, the pointwise overlap chain and decay fits.

For an eigenbasis phi_s of a truncated operator, the localization center n_s is the
site where |phi_s| is largest, and the center mass profile is
``S_n(l) = sum over s with n_s = n of |phi_s(l)|**2``. The overlap amplitude is
bounded through the chain

    |<delta_k, exp(-itH) delta_l>|  <=  Q(k, l) = sum_s |phi_s(k)| |phi_s(l)|
                                    <=  sum_n sqrt(S_n(k) S_n(l)),

which is exact at finite size, so `theorem_a_pointwise` treats a violation beyond
floating point slack as an eigensolver defect.

Functions
---------
inner_window(spec)
    Sites whose results are trusted away from the Dirichlet edges.
centers(eig)
    Localization center of every eigenvector.
center_mass_profile(eig)
    Centers plus the dense S_n(l) table.
overlap_sum(eig, k, l)
    Q(k, l).
regrouped_bound(profile, k, l)
    sum_n sqrt(S_n(k) S_n(l)).
theorem_a_pointwise(eig, k, l, grid)
    All three quantities of the chain with the chain asserted.
decay_fit(points, k_min, k_max)
    Log-linear fit of a decaying sequence.
two_term_fit(points)
    Fit of C1**2 exp(-2 gamma d) + exp(-eta d) lifted to dominate the data.
eigenfunction_decay(eig, s, d_min, d_max)
    Decay fit of one eigenvector's envelope around its center.
typical_decay_rate(eig, d_min, d_max)
    Median envelope decay rate over inner-window eigenvectors.
transfer_product(lam, alpha, theta, E, steps)
    Renormalized transfer-matrix product and its accumulated log scale.
lyapunov_transfer(lam, alpha, theta, E, steps)
    Finite-M Lyapunov exponent estimate.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from dataclasses import dataclass

import numpy as np

from scipy.optimize import curve_fit
from scipy.stats import linregress

from config.config import DEFAULTS, TOLERANCES
from scripts.arithmetic import frac_times
from scripts.dynamics import TimeGrid, sup_overlap
from scripts.eigensolve import EigenSystem
from scripts.hamiltonian import OperatorSpec
from utils.errors import DomainError, InsufficientDataError, InvariantViolation, NumericError


@dataclass(frozen=True)
class CenterProfile:
    """
    Localization centers and, when computed, the center mass table.

    Attributes
    ----------
    center_of : numpy.ndarray
        Site n_s for each eigenindex s.
    sites : numpy.ndarray
        Window sites in index order.
    inner_window : tuple of int
        Sites over which results are trusted.
    mass : numpy.ndarray or None
        ``mass[i, j] = S_{sites[i]}(sites[j])``; None for a center-only profile.
    """

    center_of: np.ndarray
    sites: np.ndarray
    inner_window: tuple[int, int]
    mass: np.ndarray | None = None

    def _index(self, site: int) -> int:
        index = int(site) - int(self.sites[0])
        if not 0 <= index < self.sites.shape[0]:
            raise DomainError(f"site {site} outside window [{self.sites[0]}, {self.sites[-1]}]")
        return index

    def mass_at(self, n: int, l: int) -> float:
        if self.mass is None:
            raise DomainError("profile holds centers only; use center_mass_profile")
        return float(self.mass[self._index(n), self._index(l)])

    def mass_column(self, l: int) -> np.ndarray:
        """S_n(l) for every center n in the window."""
        if self.mass is None:
            raise DomainError("profile holds centers only; use center_mass_profile")
        return self.mass[:, self._index(l)]

    def in_inner_window(self, site: int) -> bool:
        return self.inner_window[0] <= site <= self.inner_window[1]


@dataclass(frozen=True)
class DecayFit:
    """
    Result of a log-linear fit ``-ln value = gamma * d - log_prefactor``.

    Attributes
    ----------
    gamma_hat : float
        Fitted slope.
    log_prefactor : float
        ln C of ``value ~ C exp(-gamma d)``.
    r_squared : float
        Coefficient of determination in [0, 1].
    k_range : tuple of int
        Smallest and largest fitted distance.
    pointwise_min_rate : float
        min over fitted d > 0 of ``-ln(value) / d``.
    points : int
        Number of fitted points.
    floored : int
        Number of values raised to the log floor.
    """

    gamma_hat: float
    log_prefactor: float
    r_squared: float
    k_range: tuple[int, int]
    pointwise_min_rate: float
    points: int
    floored: int = 0

    def to_dict(self) -> dict:
        return {"gamma_hat": self.gamma_hat, "log_prefactor": self.log_prefactor, "r_squared": self.r_squared,
                "k_range": list(self.k_range), "pointwise_min_rate": self.pointwise_min_rate,
                "points": self.points, "floored": self.floored}


@dataclass(frozen=True)
class TwoTermFit:
    """
    ``C1**2 exp(-2 gamma d) + exp(-eta d)``, with C1 lifted so the curve dominates the data.

    `r_squared` refers to the unlifted least-squares fit in log space.
    """

    c1: float
    gamma: float
    eta: float
    r_squared: float
    dominates: bool

    def evaluate(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.float64)
        return self.c1 ** 2 * np.exp(-2.0 * self.gamma * d) + np.exp(-self.eta * d)

    def to_dict(self) -> dict:
        return {"c1": self.c1, "gamma": self.gamma, "eta": self.eta,
                "r_squared": self.r_squared, "dominates": self.dominates}


@dataclass(frozen=True)
class TheoremAReport:
    k: int
    l: int
    lhs_sup: float
    middle: float
    rhs: float

    @property
    def holds(self) -> bool:
        slack = TOLERANCES.chain_slack
        return self.lhs_sup <= self.middle + slack and self.middle <= self.rhs + slack


def inner_window(spec: OperatorSpec) -> tuple[int, int]:
    half = spec.radius // 2
    return -half, half


def _argmax_center(vectors: np.ndarray, sites: np.ndarray) -> np.ndarray:
    magnitude = np.abs(vectors)
    peak = magnitude.max(axis=0)
    tied = magnitude >= peak - TOLERANCES.center_tie * np.maximum(peak, 1.0)
    # smallest |n| first, then negative before positive
    priority = np.lexsort((sites, np.abs(sites)))
    rank = np.empty_like(priority)
    rank[priority] = np.arange(priority.shape[0])
    ranked = np.where(tied, rank[:, None], priority.shape[0])
    return sites[np.argmin(ranked, axis=0)]


def centers(eig: EigenSystem) -> CenterProfile:
    """
    Localization center of each eigenvector.

    ``n_s = argmax_n |phi_s(n)|``; ties go to the smallest |n|, then to the negative site.
    The assignment ignores eigenvector signs.

    Returns
    -------
    CenterProfile
        Center assignment only (`mass` is None).
    """
    return CenterProfile(center_of=_argmax_center(eig.vectors, eig.sites), sites=eig.sites,
                         inner_window=inner_window(eig.spec))


def center_mass_profile(eig: EigenSystem) -> CenterProfile:
    """
    Centers and the dense table ``S_n(l) = sum_{n_s = n} |phi_s(l)|**2``.

    Every column sums to one (rows of an orthogonal matrix regrouped by center).
    """
    profile = centers(eig)
    n = eig.dimension
    mass = np.zeros((n, n))
    np.add.at(mass, profile.center_of - profile.sites[0], (eig.vectors ** 2).T)
    return CenterProfile(center_of=profile.center_of, sites=profile.sites,
                         inner_window=profile.inner_window, mass=mass)


def overlap_sum(eig: EigenSystem, k: int, l: int) -> float:
    """
    ``Q(k, l) = sum_s |phi_s(k)| |phi_s(l)|``.

    Raises
    ------
    DomainError
        If a site is outside the window.
    """
    return float(np.abs(eig.row(k)) @ np.abs(eig.row(l)))


def regrouped_bound(profile: CenterProfile, k: int, l: int) -> float:
    return float(np.sqrt(profile.mass_column(k) * profile.mass_column(l)).sum())


def theorem_a_pointwise(eig: EigenSystem, k: int, l: int, grid: TimeGrid,
                        profile: CenterProfile | None = None) -> TheoremAReport:
    """
    Evaluate ``sup_t |overlap| <= Q(k, l) <= sum_n sqrt(S_n(k) S_n(l))``.

    Parameters
    ----------
    eig : EigenSystem
        Decomposition of the operator.
    k, l : int
        Sites in the window.
    grid : TimeGrid
        Times at which the overlap modulus is sampled.
    profile : CenterProfile, optional
        Precomputed center mass profile of `eig`.

    Returns
    -------
    TheoremAReport
        The three quantities.

    Raises
    ------
    InvariantViolation
        If the chain fails beyond ``TOLERANCES.chain_slack``.
    """
    profile = profile if profile is not None else center_mass_profile(eig)
    sup = sup_overlap(eig, k, l, grid)
    report = TheoremAReport(k=int(k), l=int(l), lhs_sup=sup.grid_max, middle=overlap_sum(eig, k, l),
                            rhs=regrouped_bound(profile, k, l))
    if not report.holds:
        raise InvariantViolation(f"overlap chain violated at (k={k}, l={l}): "
                                 f"{report.lhs_sup!r} <= {report.middle!r} <= {report.rhs!r}")
    return report


def decay_fit(points, k_min: int | None = None, k_max: int | None = None) -> DecayFit:
    """
    Least-squares line through ``(d, -ln value)``.

    Parameters
    ----------
    points : iterable of (int, float)
        Distances and values; values at or below the log floor are floored.
    k_min, k_max : int, optional
        Inclusive distance range to fit (default: all points).

    Returns
    -------
    DecayFit
        Slope ``gamma_hat``, prefactor, r-squared and the pointwise minimum rate.
        Values below ``TOLERANCES.log_floor`` are floored and counted.

    Raises
    ------
    InsufficientDataError
        With fewer than ``DEFAULTS.min_fit_points`` usable points.

    Examples
    --------
    >>> fit = decay_fit([(k, 3.0 * math.exp(-0.7 * k)) for k in range(5, 51)])
    >>> round(fit.gamma_hat, 6), round(fit.log_prefactor, 6)
    (0.7, 1.098612)
    """
    data = np.array([(float(d), float(v)) for d, v in points], dtype=np.float64).reshape(-1, 2)
    mask = np.isfinite(data[:, 1])
    if k_min is not None:
        mask &= data[:, 0] >= k_min
    if k_max is not None:
        mask &= data[:, 0] <= k_max
    data = data[mask]
    if data.shape[0] < DEFAULTS.min_fit_points:
        raise InsufficientDataError(f"decay fit needs >= {DEFAULTS.min_fit_points} points, got {data.shape[0]}")

    distance = data[:, 0]
    floored = int(np.count_nonzero(data[:, 1] < TOLERANCES.log_floor))
    y = -np.log(np.maximum(data[:, 1], TOLERANCES.log_floor))
    if np.ptp(distance) == 0:
        raise InsufficientDataError("decay fit needs at least two distinct distances")

    fit = linregress(distance, y)
    r_squared = float(np.clip(fit.rvalue ** 2, 0.0, 1.0)) if np.isfinite(fit.rvalue) else 0.0
    positive = distance > 0
    pointwise = float(np.min(y[positive] / distance[positive])) if positive.any() else math.nan
    return DecayFit(gamma_hat=float(fit.slope), log_prefactor=float(-fit.intercept), r_squared=r_squared,
                    k_range=(int(distance.min()), int(distance.max())), pointwise_min_rate=pointwise,
                    points=int(distance.shape[0]), floored=floored)


def _two_term_log(d, log_c1, gamma, eta):
    return np.logaddexp(2.0 * log_c1 - 2.0 * gamma * d, -eta * d)


def two_term_fit(points) -> TwoTermFit:
    """
    Fit ``C1**2 exp(-2 gamma d) + exp(-eta d)`` to positive decaying data.

    The fit runs in log space with gamma, eta > 0. Afterwards C1 is raised by the
    largest positive log residual, so the reported curve dominates every point.

    Raises
    ------
    InsufficientDataError
        With fewer than ``DEFAULTS.min_fit_points`` positive points.
    """
    data = np.array([(float(d), float(v)) for d, v in points], dtype=np.float64).reshape(-1, 2)
    data = data[np.isfinite(data[:, 1]) & (data[:, 1] > 0)]
    if data.shape[0] < DEFAULTS.min_fit_points:
        raise InsufficientDataError(f"two-term fit needs >= {DEFAULTS.min_fit_points} points, got {data.shape[0]}")
    d = data[:, 0]
    y = np.log(np.maximum(data[:, 1], TOLERANCES.log_floor))

    rough = decay_fit(data, None, None)
    slope = min(max(rough.gamma_hat, 1e-3), 40.0)
    guess = (min(max(rough.log_prefactor, 0.0) / 2.0, 40.0), slope / 2.0, slope)
    params, _ = curve_fit(_two_term_log, d, y, p0=guess,
                          bounds=([-50.0, 1e-6, 1e-6], [50.0, 50.0, 50.0]), maxfev=20000)
    log_c1, gamma, eta = (float(p) for p in params)

    fitted = _two_term_log(d, log_c1, gamma, eta)
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = float(np.clip(1.0 - ss_res / ss_tot, 0.0, 1.0)) if ss_tot > 0 else 0.0

    # smallest C1 covering every point; exp(-eta d) alone is untouched
    gap = np.exp(y) - np.exp(-eta * d)
    uncovered = gap > 0
    if uncovered.any():
        needed = float(np.max((np.log(gap[uncovered]) + 2.0 * gamma * d[uncovered]) / 2.0))
        log_c1 = max(log_c1, needed + 1e-9)
    dominates = bool(np.all(_two_term_log(d, log_c1, gamma, eta) >= y - 1e-12))
    return TwoTermFit(c1=math.exp(log_c1), gamma=gamma, eta=eta, r_squared=r_squared, dominates=dominates)


def eigenfunction_decay(eig: EigenSystem, s: int, d_min: int = 5, d_max: int = 30,
                        profile: CenterProfile | None = None) -> DecayFit:
    """
    Decay fit of ``max(|phi_s(n_s + d)|, |phi_s(n_s - d)|)`` for ``d_min <= d <= d_max``.

    Only distances that stay inside the window on both sides are used.
    """
    profile = profile if profile is not None else centers(eig)
    center = int(profile.center_of[s])
    column = np.abs(eig.vectors[:, s])
    points = []
    for d in range(d_min, d_max + 1):
        left, right = center - d, center + d
        if left < eig.spec.n_min or right > eig.spec.n_max:
            break
        points.append((d, max(column[eig.index_of(left)], column[eig.index_of(right)])))
    return decay_fit(points, d_min, d_max)


def typical_decay_rate(eig: EigenSystem, d_min: int = 5, d_max: int = 30) -> float:
    """
    Median envelope decay rate over eigenvectors centered in the inner window.

    Eigenvectors whose envelope leaves the window or yields too few points are skipped.
    """
    profile = centers(eig)
    rates = []
    for s, center in enumerate(profile.center_of):
        if not profile.in_inner_window(int(center)):
            continue
        try:
            rates.append(eigenfunction_decay(eig, s, d_min, d_max, profile).gamma_hat)
        except InsufficientDataError:
            continue
    if not rates:
        raise InsufficientDataError("no eigenvector centered in the inner window has a usable envelope")
    return float(np.median(rates))


def transfer_product(lam: float, alpha: float, theta: float, E: float, steps: int,
                     renormalize_every: int = DEFAULTS.renormalize_every) -> tuple[np.ndarray, float]:
    """
    ``A_M ... A_1`` with ``A_n = [[E - 2 lam cos(2 pi (n alpha + theta)), -1], [1, 0]]``.

    The running product is divided by its Frobenius norm every `renormalize_every`
    steps; the logs of those norms are accumulated.

    Returns
    -------
    tuple of (numpy.ndarray, float)
        The renormalized 2 x 2 product P and the log scale L, so that the true
        product equals ``exp(L) * P``.

    Raises
    ------
    NumericError
        If the product stops being finite.
    """
    if lam < 0:
        raise DomainError(f"lambda must be >= 0, got {lam}")
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    sites = np.arange(1, steps + 1, dtype=np.int64)
    phase = frac_times(sites, alpha) + theta
    phase = phase - np.rint(phase)
    diagonal = (E - 2.0 * lam * np.cos(2.0 * np.pi * phase)).tolist()

    a, b, c, d = 1.0, 0.0, 0.0, 1.0
    log_scale = 0.0
    for n, x in enumerate(diagonal, start=1):
        a, b, c, d = x * a - c, x * b - d, a, b
        if n % renormalize_every == 0:
            norm = math.sqrt(a * a + b * b + c * c + d * d)
            if not (math.isfinite(norm) and norm > 0.0):
                raise NumericError(f"transfer product lost finiteness at step {n}")
            a, b, c, d = a / norm, b / norm, c / norm, d / norm
            log_scale += math.log(norm)
    product = np.array([[a, b], [c, d]])
    if not np.all(np.isfinite(product)):
        raise NumericError("transfer product lost finiteness")
    return product, log_scale


def lyapunov_transfer(lam: float, alpha: float, theta: float, E: float,
                      steps: int = DEFAULTS.lyapunov_steps) -> float:
    """
    ``(1/M) ln ‖A_M ... A_1‖`` with periodic renormalization.

    Parameters
    ----------
    lam : float
        Coupling (0 allowed: free Laplacian).
    alpha, theta : float
        Frequency and phase.
    E : float
        Energy.
    steps : int, optional
        M >= 1000.

    Returns
    -------
    float
        The finite-M Lyapunov exponent estimate.
    """
    if steps < 1000:
        raise DomainError(f"steps must be >= 1000, got {steps}")
    product, log_scale = transfer_product(lam, alpha, theta, E, steps)
    return (log_scale + math.log(np.linalg.norm(product, 2))) / steps


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
