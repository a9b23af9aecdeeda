"""The averaged Hebbian learning equation on the unit sphere as a gradient flow.

States are real 1-d arrays ``w`` with ``||w|| = 1``; the correlation spectrum
``c`` is a real 1-d array (the diagonal of C in its eigenframe).
"""
from __future__ import annotations

import numpy as np

from . import tolerances as tol
from .errors import DimMismatch


def as_spectrum(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise DimMismatch(f"spectrum must be a 1-d array of length >= 2, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("spectrum entries must be finite")
    return c


def as_sphere_state(w, *, unit_norm_atol: float = tol.UNIT_NORM_ATOL) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise DimMismatch(f"sphere state must be a 1-d array of length >= 2, got shape {w.shape}")
    err = abs(np.linalg.norm(w) - 1.0)
    if err > unit_norm_atol:
        raise ValueError(f"|w| differs from 1 by {err:.3e}")
    return w


def _check_dims(w: np.ndarray, c: np.ndarray) -> None:
    if w.shape != c.shape:
        raise DimMismatch(f"state has dim {w.size} but spectrum has dim {c.size}")


def aleh_rhs(w, c) -> np.ndarray:
    """Vector field ``Cw - (w^T C w) w`` with ``C = diag(c)``."""
    w, c = as_sphere_state(w), as_spectrum(c)
    _check_dims(w, c)
    return _aleh_rhs(w, c)


def _aleh_rhs(w: np.ndarray, c: np.ndarray) -> np.ndarray:
    cw = c * w
    return cw - np.dot(w, cw) * w


def potential_lambda(w, c) -> float:
    w, c = as_sphere_state(w), as_spectrum(c)
    _check_dims(w, c)
    return _potential_lambda(w, c)


def _potential_lambda(w: np.ndarray, c: np.ndarray) -> float:
    return -0.5 * float(np.dot(c, w * w))


def grad_lambda(w, c) -> np.ndarray:
    """Riemannian gradient of the potential; the negative of :func:`aleh_rhs`."""
    return -aleh_rhs(w, c)


def tangent_project(w, v) -> np.ndarray:
    w, v = np.asarray(w, dtype=float), np.asarray(v, dtype=float)
    return v - np.dot(w, v) * w


def in_S_m(w, *, component_floor: float = tol.COMPONENT_FLOOR) -> bool:
    """True iff no component of ``w`` is within the floor of zero."""
    return bool(np.all(np.abs(np.asarray(w, dtype=float)) > component_floor))


def great_circle(w, u, tau: float) -> np.ndarray:
    """Point at parameter ``tau`` on the great circle through ``w`` with unit velocity ``u``."""
    return np.cos(tau) * np.asarray(w) + np.sin(tau) * np.asarray(u)


def random_sphere_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    w = rng.standard_normal(dim)
    return w / np.linalg.norm(w)


def random_unit_tangent(w, rng: np.random.Generator) -> np.ndarray:
    u = tangent_project(w, rng.standard_normal(len(w)))
    return u / np.linalg.norm(u)
