"""The squaring map from the sphere (minus coordinate hyperplanes) onto diagonal density matrices.

A diagonal density matrix is carried around as its diagonal ``theta``; use
``np.diag(theta)`` to get the matrix.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import tolerances as tol
from .errors import BoundaryTheta, DimMismatch, NotInSm
from .sphere import _aleh_rhs, as_spectrum, as_sphere_state, in_S_m


def as_sign_vector(sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 1 or not np.all(np.abs(sigma) == 1.0):
        raise ValueError("sign vector entries must be exactly +1 or -1")
    return sigma


def all_sign_vectors(m: int):
    """Every element of the sign-flip group acting on R^m (2^m of them)."""
    for signs in itertools.product((1.0, -1.0), repeat=m):
        yield np.array(signs)


def as_diagonal_density(theta, *, trace_atol: float = tol.TRACE_ATOL, positivity_floor: float = tol.POSITIVITY_FLOOR) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size < 2:
        raise DimMismatch(f"theta must be a 1-d array of length >= 2, got shape {theta.shape}")
    if abs(theta.sum() - 1.0) > trace_atol:
        raise ValueError(f"theta sums to {theta.sum():.12g}, expected 1")
    if np.min(theta) <= positivity_floor:
        raise BoundaryTheta(f"theta has an entry {np.min(theta):.3e} at or below the floor")
    return theta


def _require_S_m(w: np.ndarray, component_floor: float) -> None:
    if not in_S_m(w, component_floor=component_floor):
        k = int(np.argmin(np.abs(w)))
        raise NotInSm(f"component {k} of w is {w[k]:.3e}; the image would not be a regular density matrix")


def mu(w, *, component_floor: float = tol.COMPONENT_FLOOR) -> np.ndarray:
    """Diagonal of ``diag(w_1^2, ..., w_m^2)``."""
    w = as_sphere_state(w)
    _require_S_m(w, component_floor)
    return w * w


def mu_star(w, u, *, component_floor: float = tol.COMPONENT_FLOOR, tangent_atol: float = tol.TANGENT_ATOL) -> np.ndarray:
    """Differential of :func:`mu` at ``w`` applied to the tangent ``u``: ``2 diag(w * u)``."""
    w = as_sphere_state(w)
    u = np.asarray(u, dtype=float)
    if u.shape != w.shape:
        raise DimMismatch(f"tangent has shape {u.shape}, base point {w.shape}")
    if abs(np.dot(w, u)) > tangent_atol:
        raise ValueError(f"u is not tangent at w (w.u = {np.dot(w, u):.3e})")
    _require_S_m(w, component_floor)
    return np.diag(2.0 * w * u).astype(complex)


def sign_action(sigma, w) -> np.ndarray:
    sigma, w = as_sign_vector(sigma), np.asarray(w, dtype=float)
    if sigma.shape != w.shape:
        raise DimMismatch(f"sign vector has dim {sigma.size}, state has dim {w.size}")
    return sigma * w


def canonical_lift(theta) -> np.ndarray:
    """The preimage of ``theta`` with all components positive."""
    return np.sqrt(np.asarray(theta, dtype=float))


def pushforward_grad_lambda(theta, c, *, sigma=None) -> np.ndarray:
    """Image under the differential of :func:`mu` of the sphere gradient field at a preimage of ``theta``.

    The preimage is the positive lift unless ``sigma`` picks another sheet;
    the result does not depend on the choice.
    """
    theta = as_diagonal_density(theta)
    c = as_spectrum(c)
    if c.shape != theta.shape:
        raise DimMismatch(f"spectrum has dim {c.size}, theta has dim {theta.size}")
    w = canonical_lift(theta)
    if sigma is not None:
        w = sign_action(sigma, w)
    grad = -_aleh_rhs(w, c)
    return np.diag(2.0 * w * grad).astype(complex)
