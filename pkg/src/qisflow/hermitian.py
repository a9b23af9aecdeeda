"""Dense complex-Hermitian matrix arithmetic and a Jacobi eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` (real input is
promoted). Everything here is pure; nothing mutates its arguments.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import tolerances as tol
from .errors import DimMismatch, EigNoConverge


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    frame: np.ndarray  # unitary, columns are eigenvectors


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 2:
        raise DimMismatch("matrix dimension must be at least 2")
    return a


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def frobenius(a) -> float:
    return float(np.linalg.norm(a))


def hermitian_residual(a) -> float:
    """Largest entrywise deviation from Hermiticity."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, *, hermitian_atol: float = tol.HERMITIAN_ATOL) -> bool:
    return hermitian_residual(as_matrix(a)) <= hermitian_atol


def as_hermitian(a, *, hermitian_atol: float = tol.HERMITIAN_ATOL) -> np.ndarray:
    """Validate ``a`` as Hermitian and return it as a complex array."""
    a = as_matrix(a)
    res = hermitian_residual(a)
    if res > hermitian_atol:
        raise ValueError(f"matrix is not Hermitian (residual {res:.3e})")
    return a


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p, q] in place with a unitary rotation; accumulate into v."""
    apq = a[p, q]
    r = abs(apq)
    app, aqq = a[p, p].real, a[q, q].real
    if r < 1e-150 * max(1.0, abs(app), abs(aqq)):
        a[p, q] = a[q, p] = 0.0
        return
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    if abs(tau) > 1e100:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # g = diag(1, conj(phase)) @ [[c, s], [-s, c]]
    g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = app - t * r
    a[q, q] = aqq + t * r
    v[:, idx] = v[:, idx] @ g


def _fix_gauge(frame: np.ndarray) -> np.ndarray:
    """Rotate each column's phase so its first non-negligible entry is real positive."""
    frame = frame.copy()
    for k in range(frame.shape[1]):
        col = frame[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            z = col[nz[0]]
            frame[:, k] = col * (abs(z) / z)
    return frame


def eig_hermitian(
    a,
    *,
    jacobi_tol: float = tol.JACOBI_TOL,
    max_sweeps: int = tol.JACOBI_MAX_SWEEPS,
    hermitian_atol: float = tol.HERMITIAN_ATOL,
) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by Jacobi rotations.

    Each sweep performs m(m-1)/2 rotations, always pivoting on the currently
    largest off-diagonal entry. Iteration stops once the off-diagonal
    Frobenius norm drops below ``jacobi_tol * max(1, ||a||_F)``.
    """
    a0 = as_hermitian(a, hermitian_atol=hermitian_atol)
    m = a0.shape[0]
    work = (a0 + a0.conj().T) / 2
    v = np.eye(m, dtype=complex)
    threshold = jacobi_tol * max(1.0, frobenius(a0))
    per_sweep = m * (m - 1) // 2
    iu = np.triu_indices(m, 1)

    off = _off_norm(work)
    sweeps = 0
    while off >= threshold:
        if sweeps >= max_sweeps:
            raise EigNoConverge(off, sweeps)
        for _ in range(per_sweep):
            k = int(np.argmax(np.abs(work[iu])))
            _rotate(work, v, int(iu[0][k]), int(iu[1][k]))
        sweeps += 1
        off = _off_norm(work)

    vals = work.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    return EigenDecomposition(vals[order], _fix_gauge(v[:, order]))


def min_eigenvalue(a, **kwargs) -> float:
    return float(eig_hermitian(a, **kwargs).eigenvalues[0])


def reconstruct(eig: EigenDecomposition) -> np.ndarray:
    h = eig.frame
    return (h * eig.eigenvalues) @ h.conj().T
