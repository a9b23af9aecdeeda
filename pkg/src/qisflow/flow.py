"""Fixed-step integration of the sphere flow and the density-matrix flow.

Both flows are integrated with explicit Euler or classical RK4. Nothing is
projected back onto the constraint set unless ``renormalize`` is set, so the
recorded drifts are a genuine measure of integration error.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import tolerances as tol
from .errors import BoundaryReached
from .hermitian import eig_hermitian, hermitian_residual
from .immersion import as_diagonal_density, mu
from .qis import TracePotential, _qis_rhs, as_density, fisher_metric, grad_L, random_tangent
from .sphere import _aleh_rhs, _potential_lambda, as_spectrum, as_sphere_state
from .trajectory import Trajectory

METHODS = ("euler", "rk4")


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"
    dt: float = 1e-3
    t_max: float = 10.0
    renormalize: bool = False
    sample_stride: int = 10

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.dt < self.t_max:
            raise ValueError("dt must be smaller than t_max")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ValueError("sample_stride must be a positive integer")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    def to_dict(self) -> dict:
        return asdict(self)


def step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, dt: float, method: str) -> np.ndarray:
    if method == "euler":
        return y + dt * f(y)
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _sample_indices(n_steps: int, stride: int) -> set[int]:
    idx = set(range(0, n_steps + 1, stride))
    idx.add(n_steps)
    return idx


def _sphere_diagnostics(w: np.ndarray, c: np.ndarray) -> tuple[float, float]:
    return float(np.linalg.norm(w) - 1.0), _potential_lambda(w, c)


def integrate_sphere(w0, c, cfg: IntegratorConfig) -> Trajectory:
    """Integrate ``dw/dt = Cw - (w^T C w) w``.

    Diagnostics: ``norm_err`` (``|w| - 1``) and ``potential`` (the sphere potential).
    """
    w = as_sphere_state(w0).copy()
    c = as_spectrum(c)
    if c.shape != w.shape:
        raise ValueError(f"spectrum has dim {c.size}, state has dim {w.size}")

    def f(y):
        return _aleh_rhs(y, c)

    n = cfg.n_steps
    keep = _sample_indices(n, cfg.sample_stride)
    times, states, norm_err, pot = [], [], [], []
    for k in range(n + 1):
        if k:
            w = step(f, w, cfg.dt, cfg.method)
            if cfg.renormalize:
                w = w / np.linalg.norm(w)
        if k in keep:
            e, p = _sphere_diagnostics(w, c)
            times.append(k * cfg.dt)
            states.append(w.copy())
            norm_err.append(e)
            pot.append(p)
    return Trajectory(
        times,
        np.array(states),
        {"norm_err": np.array(norm_err), "potential": np.array(pot)},
        meta={"flow": "sphere", "c": c.tolist(), "integrator": cfg.to_dict()},
    )


def _is_interior(rho: np.ndarray, floor: float) -> bool:
    # Cholesky of rho - floor*I succeeds iff min eigenvalue > floor.
    h = 0.5 * (rho + rho.conj().T)
    try:
        np.linalg.cholesky(h - floor * np.eye(len(h)))
    except np.linalg.LinAlgError:
        return False
    return True


def integrate_qis(
    rho0,
    c,
    cfg: IntegratorConfig,
    *,
    positivity_floor: float = tol.POSITIVITY_FLOOR,
    raise_on_boundary: bool = True,
) -> Trajectory:
    """Integrate ``d rho/dt = (rho C + C rho) - 2 tr(rho C) rho``.

    Diagnostics: ``trace_err``, ``herm_err``, ``min_eig`` and ``potential``
    (``-2 tr(C rho)``). If the state leaves the interior the run stops; the
    trajectory up to the last interior state is attached to the raised
    ``BoundaryReached`` (or returned, flagged in ``meta``, when
    ``raise_on_boundary`` is false).
    """
    rho = as_density(rho0, positivity_floor=positivity_floor).copy()
    c = as_spectrum(c)
    if c.shape != (rho.shape[0],):
        raise ValueError(f"spectrum has dim {c.size}, rho has dim {rho.shape[0]}")
    pot = TracePotential.aleh(c)

    def f(y):
        return _qis_rhs(y, c)

    def record(k, y):
        times.append(k * cfg.dt)
        states.append(y.copy())
        diag["trace_err"].append(float(np.trace(y).real - 1.0))
        diag["herm_err"].append(hermitian_residual(y))
        diag["min_eig"].append(float(eig_hermitian(0.5 * (y + y.conj().T)).eigenvalues[0]))
        diag["potential"].append(pot(y))

    n = cfg.n_steps
    keep = _sample_indices(n, cfg.sample_stride)
    times, states = [], []
    diag = {k: [] for k in ("trace_err", "herm_err", "min_eig", "potential")}
    boundary_at = None
    for k in range(n + 1):
        if k:
            nxt = step(f, rho, cfg.dt, cfg.method)
            if cfg.renormalize:
                nxt = 0.5 * (nxt + nxt.conj().T)
                nxt = nxt / np.trace(nxt).real
            if not _is_interior(nxt, positivity_floor):
                boundary_at = k * cfg.dt
                if k - 1 not in keep:
                    record(k - 1, rho)
                break
            rho = nxt
        if k in keep:
            record(k, rho)

    traj = Trajectory(
        times,
        np.array(states),
        {name: np.array(v) for name, v in diag.items()},
        meta={
            "flow": "qis",
            "c": c.tolist(),
            "integrator": cfg.to_dict(),
            "positivity_floor": positivity_floor,
            "boundary_reached": boundary_at is not None,
        },
    )
    if boundary_at is not None:
        traj.meta["boundary_time"] = boundary_at
        if raise_on_boundary:
            raise BoundaryReached(f"min eigenvalue fell below {positivity_floor:.0e} at t = {boundary_at:.6g}", traj)
    return traj


def replicator_oracle(theta0, c, t):
    """Closed-form solution of ``d theta_j/dt = 2 theta_j (c_j - sum_k c_k theta_k)``.

    ``theta_j(t) = theta_j(0) exp(2 c_j t) / sum_k theta_k(0) exp(2 c_k t)``.
    Substituting: with ``Z(t)`` the denominator, ``Z' = 2 Z sum_k c_k theta_k(t)``,
    so ``theta_j' = 2 c_j theta_j - theta_j Z'/Z = 2 theta_j (c_j - sum_k c_k theta_k)``.
    Exponents are shifted by their maximum before exponentiating.

    ``t`` may be a scalar (returns shape ``(m,)``) or an array (returns ``(len(t), m)``).
    """
    theta0 = as_diagonal_density(theta0)
    c = as_spectrum(c)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    expo = 2.0 * np.outer(t_arr, c)
    expo -= expo.max(axis=1, keepdims=True)
    num = theta0 * np.exp(expo)
    out = num / num.sum(axis=1, keepdims=True)
    return out[0] if np.ndim(t) == 0 else out


def conjugacy_trajectories(w0, c, cfg: IntegratorConfig) -> tuple[Trajectory, Trajectory, np.ndarray]:
    """Integrate the sphere flow from ``w0`` and the density-matrix flow from ``diag(w0**2)``.

    Returns both trajectories and, per sample, the Frobenius distance between
    ``diag(w(t)**2)`` and ``rho(t)``.
    """
    theta0 = mu(w0)
    sph = integrate_sphere(w0, c, cfg)
    qis = integrate_qis(np.diag(theta0), c, cfg)
    w = sph.states
    squared = np.zeros(qis.states.shape, dtype=complex)
    idx = np.arange(w.shape[1])
    squared[:, idx, idx] = w * w
    return sph, qis, np.linalg.norm(squared - qis.states, axis=(1, 2))


def conjugacy_check(w0, c, cfg: IntegratorConfig) -> float:
    """Largest Frobenius distance between the squared sphere flow and the density-matrix flow."""
    return float(np.max(conjugacy_trajectories(w0, c, cfg)[2]))


def finite_diff_gradient_check(rho, pot, samples: int, seed: int, *, step: float = tol.FD_STEP) -> float:
    """Largest relative gap between the metric pairing with the gradient and a directional derivative.

    For each of ``samples`` random traceless Hermitian directions ``xi`` the
    curve ``r(tau) = (rho + tau xi) / tr(rho + tau xi)`` is differentiated by
    central differences and compared with ``fisher_metric(rho, grad_L, xi)``;
    the error is ``|metric - diff| / (1 + |diff|)``.
    """
    rho = as_density(rho)
    g = grad_L(rho, pot)
    rng = np.random.default_rng(seed)
    m = rho.shape[0]

    def curve(tau, xi):
        r = rho + tau * xi
        return r / np.trace(r).real

    worst = 0.0
    for _ in range(samples):
        xi = random_tangent(m, rng)
        diff = (pot(curve(step, xi)) - pot(curve(-step, xi))) / (2 * step)
        pairing = fisher_metric(rho, g, xi)
        worst = max(worst, abs(pairing - diff) / (1.0 + abs(diff)))
    return worst
