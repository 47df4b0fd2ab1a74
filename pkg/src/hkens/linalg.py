"""Dense symmetric linear algebra for the projected-clustering stage.

The eigensolver is a cyclic Jacobi rotation method. The inner sweep is
compiled with numba; everything else is plain numpy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

MAX_SWEEPS = 100


class EigenConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Symmetric matrix backed by its packed lower triangle."""

    order: int
    tril: np.ndarray

    @classmethod
    def from_dense(cls, a) -> "SymMatrix":
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        rows, cols = np.tril_indices(a.shape[0])
        packed = a[rows, cols].copy()
        packed.setflags(write=False)
        return cls(a.shape[0], packed)

    def dense(self) -> np.ndarray:
        out = np.zeros((self.order, self.order))
        rows, cols = np.tril_indices(self.order)
        out[rows, cols] = self.tril
        out[cols, rows] = self.tril
        return out


@dataclass(frozen=True, eq=False)
class Basis:
    """``vectors`` holds d orthonormal columns of length D; eigenvalues ascend."""

    vectors: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim_ambient(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim_sub(self) -> int:
        return self.vectors.shape[1]

    @classmethod
    def canonical(cls, D: int, d: int) -> "Basis":
        return cls(np.eye(D)[:, :d], np.zeros(d))


def covariance(points) -> SymMatrix:
    """Population covariance (1/n normalisation)."""
    P = np.asarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValueError("covariance of an empty point set")
    centered = P - P.mean(axis=0)
    return SymMatrix.from_dense(centered.T @ centered / P.shape[0])


@numba.njit(cache=True)
def _jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += a[i, j] * a[i, j]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if off <= tol * tol * total:
            return v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return v, -1


def eig_sym(m: SymMatrix | np.ndarray, tol: float = 1e-15, max_sweeps: int = MAX_SWEEPS) -> Basis:
    """All eigenpairs of a symmetric matrix, eigenvalues ascending.

    Equal eigenvalues keep the column order the rotations left them in
    (stable sort), which is deterministic but otherwise arbitrary.
    """
    if not isinstance(m, SymMatrix):
        m = SymMatrix.from_dense(m)
    a = m.dense()
    v, sweeps = _jacobi(a, tol, max_sweeps)
    if sweeps < 0:
        raise EigenConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return Basis(v[:, order], w[order])


def least_spread_basis(m: SymMatrix | np.ndarray, d: int) -> Basis:
    """The d eigenvectors with the smallest eigenvalues."""
    full = eig_sym(m)
    D = full.dim_ambient
    if not 1 <= d <= D:
        raise ValueError(f"subspace dimension {d} outside 1..{D}")
    return Basis(full.vectors[:, :d], full.eigenvalues[:d])


def projected_distance(x, c, basis: Basis) -> float:
    diff = np.asarray(x, dtype=np.float64) - np.asarray(c, dtype=np.float64)
    if diff.shape != (basis.dim_ambient,):
        raise ValueError(f"point dim {diff.shape} does not match basis dim {basis.dim_ambient}")
    proj = diff @ basis.vectors
    return float(np.sqrt(np.sum(proj * proj)))


def projected_sq_distances(X: np.ndarray, c: np.ndarray, basis: Basis) -> np.ndarray:
    proj = (X - c) @ basis.vectors
    return np.einsum("nd,nd->n", proj, proj)
