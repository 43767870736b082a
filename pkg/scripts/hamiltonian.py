"""
Truncated almost Mathieu operator.

The operator ``(Hu)(n) = u(n+1) + u(n-1) + 2λ cos(2π(nα + θ)) u(n)`` is restricted
to an integer window ``[n_min, n_max]`` with Dirichlet (zero) boundary conditions,
which gives a real symmetric tridiagonal matrix with unit off-diagonal. Site
phases ``nα + θ`` are reduced with `arithmetic.frac_times`, so the potential stays
accurate for windows reaching ``|n| ~ 10**6``.

Classes
-------
OperatorSpec
    Coupling, frequency, phase and window.
TridiagonalOperator
    Diagonal of the truncated operator with its site map.

Functions
---------
build(spec)
    Assemble the truncated operator.
apply(H, v)
    Matrix-vector (or matrix-matrix) product with Dirichlet truncation.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from dataclasses import dataclass, replace

import numpy as np

from scipy.sparse import diags

from scripts.arithmetic import MAX_COMPENSATED_Q, frac_times
from utils.errors import DomainError


@dataclass(frozen=True)
class OperatorSpec:
    """
    Full parameterization of a finite almost Mathieu operator.

    Attributes
    ----------
    lam : float
        Coupling lambda > 0.
    alpha : float
        Frequency in (0, 1).
    theta : float
        Phase, stored reduced to [0, 1).
    n_min, n_max : int
        Window ``n_min <= 0 <= n_max``.
    """

    lam: float
    alpha: float
    theta: float
    n_min: int
    n_max: int

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"lambda must be positive, got {self.lam!r}")
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not math.isfinite(self.theta):
            raise DomainError(f"theta must be finite, got {self.theta!r}")
        if not self.n_min <= 0 <= self.n_max:
            raise DomainError(f"window [{self.n_min}, {self.n_max}] must contain the origin")
        if max(-self.n_min, self.n_max) >= MAX_COMPENSATED_Q:
            raise DomainError(f"window [{self.n_min}, {self.n_max}] exceeds the supported site range")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", float(self.theta) % 1.0)
        object.__setattr__(self, "n_min", int(self.n_min))
        object.__setattr__(self, "n_max", int(self.n_max))

    @classmethod
    def symmetric(cls, lam: float, alpha: float, theta: float, radius: int) -> "OperatorSpec":
        return cls(lam=lam, alpha=alpha, theta=theta, n_min=-radius, n_max=radius)

    @property
    def dimension(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def radius(self) -> int:
        """Largest r with ``[-r, r]`` inside the window."""
        return min(-self.n_min, self.n_max)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1, dtype=np.int64)

    @property
    def norm_bound(self) -> float:
        return 2.0 + 2.0 * self.lam

    def with_theta(self, theta: float) -> "OperatorSpec":
        return replace(self, theta=theta)

    def shifted(self, m: int) -> "OperatorSpec":
        """Same phase, window moved by m sites."""
        return replace(self, n_min=self.n_min + m, n_max=self.n_max + m)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "alpha": self.alpha, "theta": self.theta,
                "n_min": self.n_min, "n_max": self.n_max}


@dataclass(frozen=True)
class TridiagonalOperator:
    """
    Symmetric tridiagonal matrix of a truncated operator.

    Attributes
    ----------
    diagonal : numpy.ndarray
        ``2λ cos(2π(nα + θ))`` at each window site, in site order.
    spec : OperatorSpec
        The originating parameters.

    Notes
    -----
    The off-diagonal is implicitly all ones (nearest-neighbour hopping).
    """

    diagonal: np.ndarray
    spec: OperatorSpec

    @property
    def dimension(self) -> int:
        return self.diagonal.shape[0]

    @property
    def offdiagonal(self) -> np.ndarray:
        return np.ones(max(self.dimension - 1, 0))

    @property
    def norm_bound(self) -> float:
        return self.spec.norm_bound

    def site_of_index(self, index: int) -> int:
        return self.spec.n_min + int(index)

    def index_of(self, site: int) -> int:
        """
        Matrix index of a lattice site.

        Raises
        ------
        DomainError
            If the site is outside the window.
        """
        if not self.spec.n_min <= site <= self.spec.n_max:
            raise DomainError(f"site {site} outside window [{self.spec.n_min}, {self.spec.n_max}]")
        return int(site) - self.spec.n_min

    def to_dense(self) -> np.ndarray:
        off = self.offdiagonal
        return diags([off, self.diagonal, off], [-1, 0, 1], shape=(self.dimension, self.dimension)).toarray()


def site_potential(spec: OperatorSpec, sites=None) -> np.ndarray:
    """``2λ cos(2π fract(nα + θ))`` with compensated reduction of ``nα``."""
    sites = spec.sites if sites is None else np.asarray(sites, dtype=np.int64)
    phase = frac_times(sites, spec.alpha) + spec.theta
    phase = phase - np.rint(phase)
    return 2.0 * spec.lam * np.cos(2.0 * np.pi * phase)


def build(spec: OperatorSpec) -> TridiagonalOperator:
    """
    Assemble the truncated operator for `spec`.

    Parameters
    ----------
    spec : OperatorSpec
        Validated parameters.

    Returns
    -------
    TridiagonalOperator
        ``diagonal[i] = 2λ cos(2π((n_min + i)α + θ))``.

    Examples
    --------
    >>> build(OperatorSpec(2.0, 0.5 * (5 ** 0.5 - 1), 0.0, 0, 0)).diagonal
    array([4.])
    """
    diagonal = site_potential(spec)
    diagonal.setflags(write=False)
    return TridiagonalOperator(diagonal=diagonal, spec=spec)


def apply(H: TridiagonalOperator, v) -> np.ndarray:
    """
    Compute ``H v`` with out-of-window terms set to zero.

    Parameters
    ----------
    H : TridiagonalOperator
        The operator.
    v : array_like
        Real or complex array of shape (N,) or (N, m); columns are transformed.

    Returns
    -------
    numpy.ndarray
        ``(Hv)[i] = v[i-1] + v[i+1] + diagonal[i] v[i]``.

    Raises
    ------
    DomainError
        On a length mismatch.
    """
    v = np.asarray(v)
    if v.ndim not in (1, 2) or v.shape[0] != H.dimension:
        raise DomainError(f"vector of shape {v.shape} does not match dimension {H.dimension}")
    d = H.diagonal if v.ndim == 1 else H.diagonal[:, None]
    out = d * v
    out[1:] += v[:-1]
    out[:-1] += v[1:]
    return out


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
