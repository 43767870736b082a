"""
Full eigendecomposition of symmetric tridiagonal operators.

The default backend is an implicit-shift QL iteration with Wilkinson shifts that
accumulates the Givens rotations into the eigenvector matrix. A LAPACK backend
(`scipy.linalg.eigh_tridiagonal`) is available for large phase ensembles. Both
return eigenvalues in ascending order with each eigenvector's sign fixed so that
its entry of largest modulus is positive, which makes runs reproducible.

Classes
-------
EigenSystem
    Eigenvalues, eigenvectors (columns) and the originating spec.
ResidualReport
    Maximum residual and orthogonality defect of a decomposition.

Functions
---------
eigh_tridiagonal(H, backend)
    Decompose a `TridiagonalOperator`.
residual_report(H, eig)
    Quality of a decomposition.

Raises
------
SystemExit
    If this file is executed as a standalone script.
"""


import math

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from config.config import EIGEN
from scripts.hamiltonian import OperatorSpec, TridiagonalOperator, apply
from utils.errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class EigenSystem:
    """
    Eigenpairs of a truncated operator.

    Attributes
    ----------
    values : numpy.ndarray
        Eigenvalues E_s, ascending.
    vectors : numpy.ndarray
        N x N array whose column s is the normalized eigenvector phi_s.
    spec : OperatorSpec
        Parameters of the decomposed operator.
    """

    values: np.ndarray
    vectors: np.ndarray
    spec: OperatorSpec

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    @property
    def sites(self) -> np.ndarray:
        return self.spec.sites

    def index_of(self, site: int) -> int:
        if not self.spec.n_min <= site <= self.spec.n_max:
            raise DomainError(f"site {site} outside window [{self.spec.n_min}, {self.spec.n_max}]")
        return int(site) - self.spec.n_min

    def row(self, site: int) -> np.ndarray:
        """All eigenvector amplitudes phi_s(site), indexed by s."""
        return self.vectors[self.index_of(site)]


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    max_orthogonality_defect: float

    def acceptable(self, threshold: float) -> bool:
        return self.max_residual <= threshold and self.max_orthogonality_defect <= threshold


def _fix_signs(values: np.ndarray, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.where(vectors[pivots, np.arange(vectors.shape[1])] < 0, -1.0, 1.0)
    return values, vectors * signs


def _ql_implicit(diagonal: np.ndarray, offdiagonal: np.ndarray, sweep_factor: int) -> tuple[np.ndarray, np.ndarray]:
    n = diagonal.shape[0]
    d = [float(x) for x in diagonal]
    e = [float(x) for x in offdiagonal] + [0.0]
    # rows of zt are the columns of the accumulated transform
    zt = np.eye(n)
    cap = sweep_factor * n
    sweeps = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > cap:
                raise ConvergenceError(index=l, sweeps=sweeps)
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                upper = zt[i + 1].copy()
                zt[i + 1] = s * zt[i] + c * upper
                zt[i] = c * zt[i] - s * upper
                i -= 1
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return np.array(d), zt.T


def eigh_tridiagonal(H: TridiagonalOperator, backend: str | None = None) -> EigenSystem:
    """
    All eigenpairs of a symmetric tridiagonal operator.

    Parameters
    ----------
    H : TridiagonalOperator
        Operator of dimension N >= 1.
    backend : {"ql", "lapack"}, optional
        "ql" runs the implicit-shift QL iteration with Wilkinson shifts (capped at
        ``EIGEN.sweep_factor * N`` sweeps); "lapack" delegates to SciPy. Defaults to
        ``EIGEN.backend``.

    Returns
    -------
    EigenSystem
        Ascending eigenvalues and sign-normalized eigenvectors.

    Raises
    ------
    ConvergenceError
        If the QL sweep cap is exceeded; carries the offending index.
    DomainError
        On an unknown backend.
    """
    backend = backend or EIGEN.backend
    diagonal = np.asarray(H.diagonal, dtype=np.float64)
    if H.dimension == 1:
        return EigenSystem(values=diagonal.copy(), vectors=np.ones((1, 1)), spec=H.spec)
    if backend == "ql":
        values, vectors = _ql_implicit(diagonal, H.offdiagonal, EIGEN.sweep_factor)
    elif backend == "lapack":
        values, vectors = scipy.linalg.eigh_tridiagonal(diagonal, H.offdiagonal)
    else:
        raise DomainError(f"unknown eigensolver backend {backend!r}")
    values, vectors = _fix_signs(values, vectors)
    return EigenSystem(values=values, vectors=vectors, spec=H.spec)


def residual_report(H: TridiagonalOperator, eig: EigenSystem) -> ResidualReport:
    """
    Residual and orthogonality of a decomposition.

    Returns
    -------
    ResidualReport
        ``max_s ‖H phi_s - E_s phi_s‖_2`` and ``max |<phi_s, phi_t> - delta_st|``.
    """
    if eig.vectors.shape != (H.dimension, H.dimension):
        raise DomainError(f"eigenvectors of shape {eig.vectors.shape} do not match dimension {H.dimension}")
    residual = apply(H, eig.vectors) - eig.vectors * eig.values
    gram = eig.vectors.T @ eig.vectors
    return ResidualReport(
        max_residual=float(np.max(np.linalg.norm(residual, axis=0))),
        max_orthogonality_defect=float(np.max(np.abs(gram - np.eye(H.dimension)))),
    )


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
