"""Regular density matrices with the SLD Fisher metric.

Points are complex Hermitian ``m x m`` arrays with unit trace and positive
spectrum; tangent vectors are Hermitian and traceless. Potentials are linear
trace functionals ``L(rho) = alpha * tr(A rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import tolerances as tol
from .errors import BoundaryRho, DimMismatch
from .hermitian import as_hermitian, eig_hermitian


def as_density(
    rho,
    *,
    positivity_floor: float = tol.POSITIVITY_FLOOR,
    trace_atol: float = tol.TRACE_ATOL,
) -> np.ndarray:
    """Validate ``rho`` as an interior density matrix.

    Raises ``BoundaryRho`` when the smallest eigenvalue is at or below the floor.
    """
    rho = as_hermitian(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_atol:
        raise ValueError(f"trace of rho is {tr.real:.12g}, expected 1")
    lo = eig_hermitian(rho).eigenvalues[0]
    if lo <= positivity_floor:
        raise BoundaryRho(f"min eigenvalue {lo:.3e} is not above the positivity floor {positivity_floor:.0e}")
    return rho


def as_tangent(xi, *, trace_atol: float = tol.TRACE_ATOL) -> np.ndarray:
    xi = as_hermitian(xi)
    tr = np.trace(xi)
    if abs(tr) > trace_atol:
        raise ValueError(f"tangent matrix has trace {tr:.3e}, expected 0")
    return xi


def _same_dim(*mats) -> None:
    shapes = {np.shape(a) for a in mats}
    if len(shapes) != 1:
        raise DimMismatch(f"dimension mismatch: {sorted(shapes)}")


def sld(rho, xi, **kwargs) -> np.ndarray:
    """Symmetric logarithmic derivative: the Hermitian L with (rho L + L rho)/2 = xi.

    Solved in the eigenframe of ``rho`` where it is a Hadamard quotient.
    """
    rho, xi = as_density(rho, **kwargs), as_tangent(xi)
    _same_dim(rho, xi)
    eig = eig_hermitian(rho)
    h, theta = eig.frame, eig.eigenvalues
    chi = h.conj().T @ xi @ h
    ell = 2.0 * chi / (theta[:, None] + theta[None, :])
    return h @ ell @ h.conj().T


def sld_residual(rho, xi, ell) -> float:
    rho, xi, ell = (np.asarray(a) for a in (rho, xi, ell))
    return float(np.linalg.norm(0.5 * (rho @ ell + ell @ rho) - xi))


def _real_checked(z: complex, what: str, atol: float) -> float:
    if abs(z.imag) > atol * max(1.0, abs(z.real)):
        raise ArithmeticError(f"{what} has imaginary part {z.imag:.3e}")
    return float(z.real)


def fisher_metric(rho, xi1, xi2, *, fisher_imag_atol: float = tol.FISHER_IMAG_ATOL, **kwargs) -> float:
    """SLD Fisher inner product ``tr[rho (L1 L2 + L2 L1)] / 2``."""
    rho = as_density(rho, **kwargs)
    xi1, xi2 = as_tangent(xi1), as_tangent(xi2)
    _same_dim(rho, xi1, xi2)
    l1 = sld(rho, xi1, **kwargs)
    l2 = sld(rho, xi2, **kwargs)
    z = 0.5 * np.trace(rho @ (l1 @ l2 + l2 @ l1))
    return _real_checked(complex(z), "Fisher metric", fisher_imag_atol)


def fisher_metric_eigenbasis(rho, xi1, xi2, *, fisher_imag_atol: float = tol.FISHER_IMAG_ATOL, **kwargs) -> float:
    """Same inner product as :func:`fisher_metric`, evaluated as a weighted sum in the eigenframe."""
    rho = as_density(rho, **kwargs)
    xi1, xi2 = as_tangent(xi1), as_tangent(xi2)
    _same_dim(rho, xi1, xi2)
    eig = eig_hermitian(rho)
    h, theta = eig.frame, eig.eigenvalues
    chi1 = h.conj().T @ xi1 @ h
    chi2 = h.conj().T @ xi2 @ h
    z = 2.0 * np.sum(chi1.conj() * chi2 / (theta[:, None] + theta[None, :]))
    return _real_checked(complex(z), "Fisher metric", fisher_imag_atol)


@dataclass(frozen=True)
class TracePotential:
    """Linear potential ``L(rho) = scale * tr(coeff @ rho)``."""

    coeff: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeff", as_hermitian(self.coeff))

    @classmethod
    def aleh(cls, c) -> "TracePotential":
        """The potential ``-2 tr(C rho)`` whose gradient flow realizes the learning equation."""
        return cls(np.diag(np.asarray(c, dtype=float)), -2.0)

    def __call__(self, rho) -> float:
        return float(self.scale * np.trace(self.coeff @ np.asarray(rho)).real)


def m_of_L(pot: TracePotential) -> np.ndarray:
    """Wirtinger-derivative matrix of a linear trace potential: ``scale * coeff``."""
    return pot.scale * pot.coeff


def wirtinger_matrix(func: Callable[[np.ndarray], float], rho, step: float = tol.FD_STEP) -> np.ndarray:
    """Wirtinger-derivative matrix of an arbitrary real potential by central differences.

    Off-diagonal entries (j < k) use ``(d/dxi + i d/deta) / 2`` where xi, eta are
    the real and imaginary parts of ``rho[j, k]`` (moving ``rho[k, j]`` along
    with it so the perturbation stays Hermitian); diagonal entries use plain
    real derivatives. The lower triangle is filled by Hermitian symmetry.
    """
    rho = np.asarray(rho, dtype=complex)
    m = rho.shape[0]
    out = np.zeros((m, m), dtype=complex)

    def diff(e):
        return (func(rho + step * e) - func(rho - step * e)) / (2 * step)

    for j in range(m):
        e = np.zeros((m, m), dtype=complex)
        e[j, j] = 1.0
        out[j, j] = diff(e)
        for k in range(j + 1, m):
            ere = np.zeros((m, m), dtype=complex)
            ere[j, k] = ere[k, j] = 1.0
            eim = np.zeros((m, m), dtype=complex)
            eim[j, k], eim[k, j] = 1j, -1j
            out[j, k] = 0.5 * (diff(ere) + 1j * diff(eim))
            out[k, j] = np.conj(out[j, k])
    return out


def grad_from_m(rho: np.ndarray, mm: np.ndarray) -> np.ndarray:
    """Fisher gradient ``(rho M + M rho)/2 - tr(rho M) rho``; no validation."""
    return 0.5 * (rho @ mm + mm @ rho) - np.trace(rho @ mm).real * rho


def grad_L(rho, pot, **kwargs) -> np.ndarray:
    """Fisher gradient of a potential at an interior ``rho``.

    ``pot`` is normally a :class:`TracePotential`; any other callable is
    differentiated numerically through :func:`wirtinger_matrix`.
    """
    rho = as_density(rho, **kwargs)
    if isinstance(pot, TracePotential):
        _same_dim(rho, pot.coeff)
        mm = m_of_L(pot)
    else:
        mm = wirtinger_matrix(pot, rho)
    return grad_from_m(rho, mm)


def _qis_rhs(rho: np.ndarray, c: np.ndarray) -> np.ndarray:
    return -grad_from_m(rho, -2.0 * np.diag(c).astype(complex))


def qis_rhs(rho, c, **kwargs) -> np.ndarray:
    """Equation of motion ``(rho C + C rho) - 2 tr(rho C) rho`` with ``C = diag(c)``."""
    rho = as_density(rho, **kwargs)
    c = np.asarray(c, dtype=float)
    if c.shape != (rho.shape[0],):
        raise DimMismatch(f"spectrum length {c.size} does not match rho of dim {rho.shape[0]}")
    return _qis_rhs(rho, c)


def random_interior_density(dim: int, seed: int) -> np.ndarray:
    """``B B^dagger / tr(B B^dagger)`` for a complex Gaussian ``B``; deterministic per seed."""
    if dim < 2:
        raise DimMismatch("dimension must be at least 2")
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = b @ b.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_tangent(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    xi = 0.5 * (a + a.conj().T)
    return xi - (np.trace(xi).real / dim) * np.eye(dim)
