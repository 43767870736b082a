"""
Time evolution ``exp(-itH)`` through the spectral decomposition.

All evolution goes through ``V exp(-itΛ) V^T``, which is unitary at every t and
reuses the eigensystem the localization bounds need anyway. The supremum over all
real t is not computable; `sup_overlap` samples it on a grid and pairs the sample
maximum with the certified bound ``Q(k, l) = sum_s |phi_s(k)| |phi_s(l)|``, which
dominates the overlap modulus at every t.

Classes
-------
TimeGrid
    Evenly spaced times on [0, t_max], including 0.
SupOverlap
    Grid maximum, certified bound and the maximizing time.

Functions
---------
evolve(eig, psi0, t)
    State at time t.
evolve_series(eig, psi0, times)
    States at several times (one column per time).
overlap(eig, k, l, t)
    ``<delta_k, exp(-itH) delta_l>``.
overlap_series(eig, k, l, times)
    The same overlap for an array of times.
sup_overlap(eig, k, l, grid)
    Grid maximum of the overlap modulus with its certificate.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


from dataclasses import dataclass

import numpy as np

from config.config import DEFAULTS, TOLERANCES
from scripts.eigensolve import EigenSystem
from utils.errors import DomainError, InvariantViolation


@dataclass(frozen=True)
class TimeGrid:
    """
    ``count`` evenly spaced times on ``[0, t_max]``.

    Attributes
    ----------
    t_max : float
        Largest time, > 0.
    count : int
        Number of times, >= 2.
    """

    t_max: float
    count: int

    def __post_init__(self):
        if not self.t_max > 0:
            raise DomainError(f"t_max must be positive, got {self.t_max}")
        if self.count < 2:
            raise DomainError(f"a time grid needs at least 2 points, got {self.count}")

    @classmethod
    def for_dimension(cls, n: int, count: int = DEFAULTS.t_count,
                      t_max: float | None = None) -> "TimeGrid":
        return cls(t_max=float(t_max) if t_max else DEFAULTS.t_max_factor * n, count=int(count))

    @property
    def spacing(self) -> float:
        return self.t_max / (self.count - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.count)


@dataclass(frozen=True)
class SupOverlap:
    grid_max: float
    certified_bound: float
    argmax_t: float


def _check_state(eig: EigenSystem, psi0) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (eig.dimension,):
        raise DomainError(f"state of shape {psi0.shape} does not match dimension {eig.dimension}")
    return psi0


def evolve(eig: EigenSystem, psi0, t: float) -> np.ndarray:
    """
    ``psi(t) = V exp(-itΛ) V^T psi0``.

    Parameters
    ----------
    eig : EigenSystem
        Decomposition of H.
    psi0 : array_like
        Initial state of length N.
    t : float
        Time.

    Returns
    -------
    numpy.ndarray
        Complex state of length N with the norm of `psi0`.
    """
    psi0 = _check_state(eig, psi0)
    coefficients = eig.vectors.T @ psi0
    return eig.vectors @ (np.exp(-1j * t * eig.values) * coefficients)


def evolve_series(eig: EigenSystem, psi0, times) -> np.ndarray:
    """States at every time in `times`, shape (N, len(times))."""
    psi0 = _check_state(eig, psi0)
    times = np.asarray(times, dtype=np.float64)
    coefficients = eig.vectors.T @ psi0
    phases = np.exp(-1j * np.outer(eig.values, times))
    return eig.vectors @ (phases * coefficients[:, None])


def overlap_series(eig: EigenSystem, k: int, l: int, times) -> np.ndarray:
    """``sum_s phi_s(k) phi_s(l) exp(-i t E_s)`` for each t in `times`."""
    weights = eig.row(k) * eig.row(l)
    times = np.asarray(times, dtype=np.float64)
    return np.exp(-1j * np.outer(times, eig.values)) @ weights


def overlap(eig: EigenSystem, k: int, l: int, t: float) -> complex:
    """
    ``<delta_k, exp(-itH) delta_l> = sum_s phi_s(k) phi_s(l) exp(-i t E_s)``.

    Raises
    ------
    DomainError
        If a site is outside the window.
    """
    return complex(overlap_series(eig, k, l, [t])[0])


def sup_overlap(eig: EigenSystem, k: int, l: int, grid: TimeGrid) -> SupOverlap:
    """
    Grid estimate of ``sup_t |<delta_k, exp(-itH) delta_l>|`` and its certificate.

    Returns
    -------
    SupOverlap
        ``grid_max <= certified_bound`` always holds.

    Raises
    ------
    InvariantViolation
        If the grid maximum exceeds the certificate beyond rounding slack.
    """
    times = grid.times
    modulus = np.abs(overlap_series(eig, k, l, times))
    best = int(np.argmax(modulus))
    certified = float(np.abs(eig.row(k)) @ np.abs(eig.row(l)))
    result = SupOverlap(grid_max=float(modulus[best]), certified_bound=certified, argmax_t=float(times[best]))
    if result.grid_max > certified + TOLERANCES.sup_slack:
        raise InvariantViolation(f"grid sup {result.grid_max!r} exceeds certificate {certified!r} at ({k}, {l})")
    return result


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
