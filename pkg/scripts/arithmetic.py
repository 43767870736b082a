"""
Continued fractions, Diophantine checks and phase resonances for the frequency alpha.

Every evaluation of ``‖qα‖ = dist(qα, ℤ)`` goes through `frac_times`, which splits
alpha into two 26-bit halves so that both partial products with an integer
``|q| < 2**26`` are exact doubles. The fractional parts of the two halves are then
reduced exactly and combined with a single rounding, which keeps the absolute error
near 1e-16 exactly where resonances live. Larger multipliers fall back to 50-digit
`mpmath` arithmetic.

Functions
---------
frac_times(q, alpha)
    Signed fractional part of q*alpha in [-1/2, 1/2].
norm_dist(q, alpha)
    Distance of q*alpha to the nearest integer.
continued_fraction(alpha, depth)
    Partial quotients and convergents of alpha.
beta_estimate(alpha, Q)
    Finite-horizon proxy of the exponent beta(alpha).
diophantine_check(alpha, params, Q)
    Exhaustive check of ‖qα‖ >= kappa / q**tau for q <= Q.
resonance_distance(theta, k, alpha)
    ‖2θ − kα‖ for integer or array k.
resonances(theta, alpha, eta, K, c0)
    The eta-resonant integers of a phase and the allowed decay windows between them.
resonant_phase_measure(k, eta)
    Lebesgue measure of the phases for which k is eta-resonant.
empirical_resonant_fraction(k, alpha, eta, samples, seed)
    Monte Carlo estimate of the same measure.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from mpmath import mp, mpf, nint

from config.config import DEFAULTS
from utils.errors import DomainError


MAX_COMPENSATED_Q = 2 ** 26
DIOPHANTINE_BLOCK = 2 ** 20
_SPLITTER = 134217729.0  # 2**27 + 1


@dataclass(frozen=True)
class ContinuedFraction:
    """
    Continued-fraction expansion ``alpha = [0; a_1, a_2, ...]``.

    Attributes
    ----------
    partial_quotients : list of int
        a_1, a_2, ... (the leading zero is omitted).
    convergents : list of tuple of int
        (p_k, q_k) after each partial quotient.
    truncated : bool
        The remainder vanished before `depth` quotients were produced (rational input).
    """

    partial_quotients: list[int]
    convergents: list[tuple[int, int]]
    truncated: bool

    @property
    def denominators(self) -> list[int]:
        return [q for _, q in self.convergents]


@dataclass(frozen=True)
class Frequency:
    """
    A frequency alpha in (0, 1) together with its expansion.

    Attributes
    ----------
    value : float
        The frequency.
    cf_depth : int
        Number of partial quotients actually computed.
    expansion : ContinuedFraction
        The expansion itself.
    """

    value: float
    cf_depth: int
    expansion: ContinuedFraction

    @classmethod
    def from_value(cls, alpha: float, depth: int = DEFAULTS.cf_depth) -> "Frequency":
        expansion = continued_fraction(alpha, depth)
        return cls(value=float(alpha), cf_depth=len(expansion.partial_quotients), expansion=expansion)

    @property
    def rational(self) -> bool:
        return self.expansion.truncated


@dataclass(frozen=True)
class DiophantineParams:
    """Constants of the condition ``‖qα‖ >= kappa / q**tau``."""

    kappa: float
    tau: float

    def __post_init__(self):
        if not (self.kappa > 0 and self.tau > 0):
            raise DomainError(f"kappa and tau must be positive, got kappa={self.kappa}, tau={self.tau}")


@dataclass(frozen=True)
class DiophantineReport:
    holds: bool
    worst_q: int
    worst_value: float
    horizon: int


@dataclass(frozen=True)
class BetaEstimate:
    """
    Finite-horizon proxy of ``beta(alpha) = limsup -ln‖qα‖ / q``.

    Attributes
    ----------
    value : float
        max over the evaluated q <= horizon of max(0, -ln‖qα‖ / q); `inf` when infinite.
    horizon : int
        The horizon Q.
    argmax_q : int
        The q attaining the maximum.
    infinite : bool
        Some ‖qα‖ vanished (alpha rational at this precision).
    """

    value: float
    horizon: int
    argmax_q: int
    infinite: bool


@dataclass(frozen=True)
class AllowedWindow:
    """
    Distance window ``[c0 (1 + |k_j|), |k_{j+1}| / c0]`` between consecutive resonances.

    `closed` is False for the last window, whose upper end is the scan horizon
    divided by c0 rather than a resonance.
    """

    lower: float
    upper: float
    closed: bool = True

    def contains(self, distance: float) -> bool:
        return self.lower <= distance <= self.upper


@dataclass(frozen=True)
class ResonanceReport:
    """
    The eta-resonant integers of a phase.

    Attributes
    ----------
    theta : float
        Phase reduced to [0, 1).
    eta : float
        Resonance strength.
    horizon : int
        Scan horizon K; every k with |k| <= K was tested.
    resonant_k : list of int
        Sorted resonant integers; 0 is always among them.
    c0 : float or None
        Constant used to build `windows`.
    windows : list of AllowedWindow
        Allowed decay windows between consecutive resonance magnitudes.
    """

    theta: float
    eta: float
    horizon: int
    resonant_k: list[int]
    c0: float | None = None
    windows: list[AllowedWindow] = field(default_factory=list)


@dataclass(frozen=True)
class MeasureEstimate:
    """Monte Carlo estimate of a resonant phase measure with its binomial error."""

    fraction: float
    expected: float
    sigma: float
    samples: int
    undoubled: float

    def within(self, n_sigma: float = 3.0) -> bool:
        return abs(self.fraction - self.expected) <= n_sigma * self.sigma + 1.0 / self.samples


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (math.isfinite(alpha) and 0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


def _frac_times_mp(q: int, alpha: float) -> float:
    with mp.workdps(50):
        x = mpf(int(q)) * mpf(alpha)
        return float(x - nint(x))


def frac_times(q, alpha: float):
    """
    Signed fractional part of ``q * alpha``, centered in [-1/2, 1/2].

    Parameters
    ----------
    q : int or array_like of int
        Integer multiplier(s), any sign.
    alpha : float
        The frequency (not restricted to (0, 1) here).

    Returns
    -------
    float or numpy.ndarray
        ``q*alpha - round(q*alpha)``, computed with exact two-product splitting for
        ``|q| < 2**26`` and 50-digit arithmetic beyond.
    """
    scalar = np.ndim(q) == 0
    qs = np.atleast_1d(np.asarray(q, dtype=np.int64))

    t = _SPLITTER * alpha
    hi = t - (t - alpha)
    lo = alpha - hi

    qf = qs.astype(np.float64)
    a = qf * hi
    b = qf * lo
    a = a - np.rint(a)
    b = b - np.rint(b)
    s = a + b
    out = s - np.rint(s)

    big = np.abs(qs) >= MAX_COMPENSATED_Q
    if big.any():
        out[big] = [_frac_times_mp(int(v), alpha) for v in qs[big]]
    return float(out[0]) if scalar else out


def norm_dist(q, alpha: float):
    """
    Distance of ``q * alpha`` to the nearest integer, ``‖qα‖``.

    Parameters
    ----------
    q : int or array_like of int
        Positive integer(s).
    alpha : float
        The frequency.

    Returns
    -------
    float or numpy.ndarray
        Values in [0, 1/2].

    Examples
    --------
    >>> norm_dist(1, 0.25)
    0.25
    >>> norm_dist(2, 0.25)
    0.5
    """
    return np.abs(frac_times(q, alpha)) if np.ndim(q) else abs(frac_times(q, alpha))


def continued_fraction(alpha: float, depth: int) -> ContinuedFraction:
    """
    Standard continued-fraction expansion of alpha.

    The expansion is computed in exact rational arithmetic on the binary value of
    alpha, so it is exact for as many quotients as the double carries (about 38 for
    the golden mean) and terminates, flagged, on inputs that are rational at short
    depth.

    Parameters
    ----------
    alpha : float
        Frequency in (0, 1).
    depth : int
        Maximum number of partial quotients.

    Returns
    -------
    ContinuedFraction
        Quotients, convergents ``p_k = a_k p_{k-1} + p_{k-2}`` (same for q) and the
        truncation flag.

    Raises
    ------
    DomainError
        If alpha is outside (0, 1) or depth < 1.
    """
    alpha = _check_alpha(alpha)
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")

    x = Fraction(alpha)
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    quotients: list[int] = []
    convergents: list[tuple[int, int]] = []
    truncated = False
    for _ in range(depth):
        if x == 0:
            truncated = True
            break
        y = 1 / x
        a = math.floor(y)
        x = y - a
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        quotients.append(int(a))
        convergents.append((int(p), int(q)))
    return ContinuedFraction(partial_quotients=quotients, convergents=convergents, truncated=truncated)


def beta_estimate(alpha: float, Q: int, small_q: int = DEFAULTS.small_q,
                  depth: int = DEFAULTS.cf_depth) -> BetaEstimate:
    """
    Finite-horizon proxy for ``beta(alpha) = limsup -ln‖qα‖ / q``.

    The maximum of ``-ln‖qα‖ / q`` is attained at convergent denominators, so only
    those (up to Q) and every ``q <= small_q`` are evaluated. The value is
    nondecreasing in Q.

    Parameters
    ----------
    alpha : float
        Frequency in (0, 1).
    Q : int
        Horizon, >= 1.
    small_q : int, optional
        All q up to this bound are evaluated exhaustively.
    depth : int, optional
        Expansion depth used to list convergent denominators.

    Returns
    -------
    BetaEstimate
        The estimate; ``infinite`` is set when some ‖qα‖ vanishes.
    """
    alpha = _check_alpha(alpha)
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")

    candidates = set(range(1, min(Q, small_q) + 1))
    candidates.update(q for q in continued_fraction(alpha, depth).denominators if q <= Q)
    qs = np.array(sorted(candidates), dtype=np.int64)
    dists = norm_dist(qs, alpha)

    zeros = np.flatnonzero(dists == 0.0)
    if zeros.size:
        return BetaEstimate(value=math.inf, horizon=Q, argmax_q=int(qs[zeros[0]]), infinite=True)

    rates = np.maximum(0.0, -np.log(dists) / qs)
    best = int(np.argmax(rates))
    return BetaEstimate(value=float(rates[best]), horizon=Q, argmax_q=int(qs[best]), infinite=False)


def diophantine_check(alpha: float, params: DiophantineParams, Q: int) -> DiophantineReport:
    """
    Exhaustively test ``‖qα‖ >= kappa / q**tau`` for ``1 <= q <= Q``.

    Parameters
    ----------
    alpha : float
        Frequency in (0, 1).
    params : DiophantineParams
        kappa and tau.
    Q : int
        Horizon, ``Q >= 1``. The scan runs in blocks of ``DIOPHANTINE_BLOCK``;
        multipliers from ``2**26`` on go through 50-digit arithmetic and are slow.

    Returns
    -------
    DiophantineReport
        `holds` and the q minimizing ``‖qα‖ q**tau`` (first one on ties).
    """
    alpha = _check_alpha(alpha)
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")

    worst_q, worst_value = 1, math.inf
    for start in range(1, Q + 1, DIOPHANTINE_BLOCK):
        qs = np.arange(start, min(start + DIOPHANTINE_BLOCK, Q + 1), dtype=np.int64)
        scaled = norm_dist(qs, alpha) * qs.astype(np.float64) ** params.tau
        j = int(np.argmin(scaled))
        if scaled[j] < worst_value:
            worst_q, worst_value = int(qs[j]), float(scaled[j])
    return DiophantineReport(holds=bool(worst_value >= params.kappa), worst_q=worst_q, worst_value=worst_value,
                             horizon=Q)


def resonance_distance(theta: float, k, alpha: float):
    """
    ``‖2θ − kα‖`` for integer or array k.

    Doubling theta is exact, so the only rounding comes from `frac_times`.
    """
    r = 2.0 * (theta % 1.0) - frac_times(k, alpha)
    return np.abs(r - np.rint(r))


def allowed_windows(resonant_k, c0: float, horizon: int) -> list[AllowedWindow]:
    """
    Distance windows between consecutive resonance magnitudes.

    Parameters
    ----------
    resonant_k : iterable of int
        Resonant integers (any sign); only magnitudes matter.
    c0 : float
        Constant >= 1 shrinking every window from both sides.
    horizon : int
        Scan horizon; the last window ends at ``horizon / c0``.

    Returns
    -------
    list of AllowedWindow
        Nonempty windows in increasing order.
    """
    if c0 < 1:
        raise DomainError(f"c0 must be >= 1, got {c0}")
    magnitudes = sorted({abs(int(k)) for k in resonant_k})
    windows = []
    for current, following in zip(magnitudes, magnitudes[1:]):
        lower, upper = c0 * (1 + current), following / c0
        if lower <= upper:
            windows.append(AllowedWindow(lower, upper, True))
    lower, upper = c0 * (1 + magnitudes[-1]), horizon / c0
    if lower <= upper:
        windows.append(AllowedWindow(lower, upper, False))
    return windows


def resonances(theta: float, alpha: float, eta: float, K: int, c0: float | None = None) -> ResonanceReport:
    """
    Scan ``|k| <= K`` for eta-resonances of theta: ``‖2θ − kα‖ <= exp(-eta |k|)``.

    Parameters
    ----------
    theta : float
        Phase; reduced mod 1.
    alpha : float
        Frequency in (0, 1).
    eta : float
        Positive resonance strength.
    K : int
        Horizon, >= 1. Both signs of k are tested independently.
    c0 : float, optional
        When given, the allowed windows for this constant are attached.

    Returns
    -------
    ResonanceReport
        Sorted resonant set (always containing 0) and optional windows.
    """
    alpha = _check_alpha(alpha)
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")

    theta = float(theta) % 1.0
    ks = np.arange(-K, K + 1, dtype=np.int64)
    hits = resonance_distance(theta, ks, alpha) <= np.exp(-eta * np.abs(ks))
    resonant = [int(k) for k in ks[hits]]
    windows = allowed_windows(resonant, c0, K) if c0 is not None else []
    return ResonanceReport(theta=theta, eta=float(eta), horizon=int(K), resonant_k=resonant, c0=c0, windows=windows)


def resonant_phase_measure(k: int, eta: float) -> float:
    """
    Lebesgue measure of ``{θ in [0, 1): ‖2θ − kα‖ <= exp(-eta |k|)}``.

    The doubling map covers the circle twice, so the measure is ``2 eps`` for
    ``eps = exp(-eta |k|) <= 1/2`` and the whole circle otherwise; it does not
    depend on alpha.

    Raises
    ------
    DomainError
        If k is zero or eta is not positive.
    """
    if k == 0:
        raise DomainError("k must be nonzero")
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    return min(1.0, 2.0 * math.exp(-eta * abs(k)))


def undoubled_measure(k: int, eta: float) -> float:
    """``exp(-eta |k|)``, the measure without the doubling factor; reported for comparison."""
    return math.exp(-eta * abs(k))


def empirical_resonant_fraction(k: int, alpha: float, eta: float, samples: int,
                                seed: int = DEFAULTS.seed) -> MeasureEstimate:
    """
    Fraction of iid uniform phases for which k is eta-resonant.

    Parameters
    ----------
    k : int
        Nonzero integer.
    alpha : float
        Frequency in (0, 1).
    eta : float
        Resonance strength.
    samples : int
        Number of uniform phases.
    seed : int, optional
        Generator seed.

    Returns
    -------
    MeasureEstimate
        Empirical fraction, analytic measure and the binomial sigma of the analytic value.
    """
    alpha = _check_alpha(alpha)
    expected = resonant_phase_measure(k, eta)
    thetas = np.random.default_rng(seed).random(samples)
    r = 2.0 * thetas - frac_times(k, alpha)
    hits = np.abs(r - np.rint(r)) <= math.exp(-eta * abs(k))
    sigma = math.sqrt(expected * (1.0 - expected) / samples)
    return MeasureEstimate(fraction=float(hits.mean()), expected=expected, sigma=sigma,
                           samples=int(samples), undoubled=undoubled_measure(k, eta))


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
