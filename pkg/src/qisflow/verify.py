"""Built-in property suite: numerical checks of every geometric and dynamical claim.

Each ``check_*`` function runs one experiment and returns a ``CheckResult``
holding the measured value and the threshold it must stay under (for the two
ratio checks, the interval it must fall in).
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .flow import IntegratorConfig, conjugacy_check, finite_diff_gradient_check, integrate_qis, integrate_sphere, replicator_oracle
from .immersion import mu, mu_star
from .oja import CorrelationModel, compare_with_aleh
from .qis import TracePotential, fisher_metric, fisher_metric_eigenbasis, random_interior_density, random_tangent, sld, sld_residual
from .sphere import random_sphere_state, tangent_project

THETA1_AT_1 = 0.880797  # e^4 / (e^4 + e^2), six decimals


@dataclass
class CheckResult:
    name: str
    value: float
    threshold: float | tuple[float, float]
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        thr = self.threshold if isinstance(self.threshold, tuple) else f"< {self.threshold:.0e}"
        return f"[{status}] {self.name:<28} value={self.value:.3e} threshold={thr} ({self.seconds:.2f}s) {self.detail}".rstrip()


def _below(name, value, threshold, detail=""):
    return CheckResult(name, float(value), threshold, bool(value < threshold), detail=detail)


def _density_samples(dims, n, seed):
    rng = np.random.default_rng(seed)
    for m in dims:
        for _ in range(n):
            yield random_interior_density(m, int(rng.integers(2**63))), random_tangent(m, rng), random_tangent(m, rng)


def check_sld(n: int = 100, seed: int = 1, dims=(2, 3, 5)) -> CheckResult:
    """Defining-equation residual of the SLD, max over samples."""
    worst = max(sld_residual(rho, xi, sld(rho, xi)) for rho, xi, _ in _density_samples(dims, n, seed))
    return _below("sld_residual", worst, 1e-9)


def check_metric_forms(n: int = 100, seed: int = 1, dims=(2, 3, 5)) -> CheckResult:
    """Trace form vs eigenframe sum of the Fisher metric, error relative to max(1, |value|)."""
    worst = 0.0
    for rho, xi1, xi2 in _density_samples(dims, n, seed):
        a = fisher_metric(rho, xi1, xi2)
        b = fisher_metric_eigenbasis(rho, xi1, xi2)
        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return _below("metric_forms", worst, 1e-10)


def check_pullback(n: int = 100, seed: int = 2, dims=(2, 3, 5)) -> CheckResult:
    """Fisher metric of pushed-forward tangents equals 4 u.u'.

    Error is measured relative to ``4 |u| |u'|``, the largest the right-hand side can be.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in dims:
        for _ in range(n):
            w = random_sphere_state(m, rng)
            u = tangent_project(w, rng.standard_normal(m))
            v = tangent_project(w, rng.standard_normal(m))
            lhs = fisher_metric(np.diag(mu(w)), mu_star(w, u), mu_star(w, v))
            scale = 4.0 * np.linalg.norm(u) * np.linalg.norm(v)
            worst = max(worst, abs(lhs - 4.0 * np.dot(u, v)) / scale)
    return _below("metric_pullback", worst, 1e-9)


def check_gradient(points: int = 50, samples: int = 20, seed: int = 3, m: int = 4) -> CheckResult:
    """Fisher pairing with grad L vs central-difference derivative of L."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        rho = random_interior_density(m, int(rng.integers(2**63)))
        pot = TracePotential.aleh(rng.uniform(0.0, 3.0, m))
        worst = max(worst, finite_diff_gradient_check(rho, pot, samples, int(rng.integers(2**63))))
    return _below("gradient_defining_property", worst, 1e-6)


def _tie_free_spectrum(rng, m, lo=0.5, hi=2.0, min_gap=0.05):
    while True:
        c = rng.uniform(lo, hi, m)
        if np.min(np.diff(np.sort(c))) > min_gap:
            return c


def _interior_sphere_point(rng, m, floor=0.05):
    while True:
        w = random_sphere_state(m, rng)
        if np.min(np.abs(w)) > floor:
            return w


def check_conjugacy(seed: int = 4, m: int = 5) -> CheckResult:
    """Squared sphere flow vs density-matrix flow, RK4 dt=1e-3 up to t=5."""
    rng = np.random.default_rng(seed)
    c = _tie_free_spectrum(rng, m)
    w0 = _interior_sphere_point(rng, m)
    dev = conjugacy_check(w0, c, IntegratorConfig("rk4", 1e-3, 5.0))
    return _below("conjugacy", dev, 1e-7, detail=f"c={np.round(c, 3).tolist()}")


def check_replicator() -> CheckResult:
    """theta_1(1) from both flows (m=2, c=(2,1), start (1/2,1/2)) against 0.880797."""
    cfg = IntegratorConfig("rk4", 1e-3, 1.0)
    s = 1.0 / np.sqrt(2.0)
    sph = integrate_sphere([s, s], [2.0, 1.0], cfg).final[0] ** 2
    qis = integrate_qis(np.diag([0.5, 0.5]), [2.0, 1.0], cfg).final[0, 0].real
    oracle = replicator_oracle([0.5, 0.5], [2.0, 1.0], 1.0)[0]
    err = max(abs(sph - THETA1_AT_1), abs(qis - THETA1_AT_1), abs(oracle - THETA1_AT_1))
    return _below("replicator_theta1", err, 1e-6, detail=f"sphere={sph:.9f} qis={qis:.9f}")


def check_drift(seed: int = 5) -> list[CheckResult]:
    """Constraint drift over t in [0, 10] with RK4 dt=1e-3 and no renormalization."""
    rng = np.random.default_rng(seed)
    cfg = IntegratorConfig("rk4", 1e-3, 10.0, renormalize=False, sample_stride=10)
    c = np.array([1.0, 0.7, 0.4])
    sph = integrate_sphere(random_sphere_state(3, rng), c, cfg)
    qis = integrate_qis(random_interior_density(3, int(rng.integers(2**63))), c, cfg)
    min_eig = qis.diagnostics["min_eig"]
    return [
        _below("sphere_norm_drift", np.max(np.abs(sph.diagnostics["norm_err"])), 1e-8),
        _below("qis_trace_drift", np.max(np.abs(qis.diagnostics["trace_err"])), 1e-8),
        _below("qis_hermiticity", np.max(qis.diagnostics["herm_err"]), 1e-10),
        CheckResult(
            "qis_min_eig_positive",
            float(min_eig[-1]),
            0.0,
            bool(np.all(min_eig > 0) and min_eig[-1] < min_eig[0]),
            detail="must stay positive while decreasing",
        ),
    ]


def _final_error(flow, method, dt):
    cfg = IntegratorConfig(method, dt, 1.0, sample_stride=1)
    exact = replicator_oracle([0.5, 0.5], [2.0, 1.0], 1.0)[0]
    s = 1.0 / np.sqrt(2.0)
    if flow == "sphere":
        return abs(integrate_sphere([s, s], [2.0, 1.0], cfg).final[0] ** 2 - exact)
    return abs(integrate_qis(np.diag([0.5, 0.5]), [2.0, 1.0], cfg).final[0, 0].real - exact)


ORDER_STEPS = {"euler": (1e-2, 5e-3), "rk4": (5e-2, 2.5e-2)}
ORDER_BANDS = {"euler": (1.8, 2.2), "rk4": (12.0, 20.0)}


def check_orders() -> list[CheckResult]:
    """Error ratio when halving dt, at t=1 on the m=2 benchmark, for both flows."""
    out = []
    for method, (dt1, dt2) in ORDER_STEPS.items():
        lo, hi = ORDER_BANDS[method]
        for flow in ("sphere", "qis"):
            ratio = _final_error(flow, method, dt1) / _final_error(flow, method, dt2)
            out.append(CheckResult(f"order_{method}_{flow}", ratio, (lo, hi), bool(lo <= ratio <= hi)))
    return out


PCA_SPECTRA = ([3.0, 2.0, 1.0], [1.0, 0.5, 0.2, 0.1], [0.4, 1.5, 0.9, 1.1, 0.2])


def check_pca(seed: int = 6, dt: float = 1e-2) -> list[CheckResult]:
    """Top-eigenvector convergence at T = 30 / spectral gap.

    The density-matrix run lowers the positivity floor to zero: by T the
    non-leading eigenvalues sit far below the default floor, which would
    otherwise stop the run early.
    """
    rng = np.random.default_rng(seed)
    worst_w, worst_theta = 0.0, 0.0
    for c in map(np.asarray, PCA_SPECTRA):
        top = np.sort(c)[::-1]
        T = 30.0 / (top[0] - top[1])
        J = int(np.argmax(c))
        w0 = _interior_sphere_point(rng, c.size)
        cfg = IntegratorConfig("rk4", dt, T, sample_stride=100)
        w_T = integrate_sphere(w0, c, cfg).final
        theta_T = integrate_qis(np.diag(w0 * w0), c, cfg, positivity_floor=0.0).final
        worst_w = max(worst_w, 1.0 - abs(w_T[J]))
        worst_theta = max(worst_theta, 1.0 - theta_T[J, J].real)
    return [_below("pca_sphere_1-|w_J|", worst_w, 1e-6), _below("pca_qis_1-theta_J", worst_theta, 1e-6)]


def check_stochastic_bridge(seed: int = 2024, runs: int = 100, steps: int = 100_000) -> list[CheckResult]:
    """Averaged truncated-Oja runs vs the deterministic flow, at eta=1e-3 and eta=5e-4."""
    s = 1.0 / np.sqrt(2.0)
    dev = {}
    for eta, stride in ((1e-3, 50), (5e-4, 100)):
        res = compare_with_aleh(CorrelationModel([2.0, 1.0], eta), [s, s], steps, runs, seed, "truncated", stride=stride)
        dev[eta] = res.deviation
    return [
        _below("oja_bridge_eta=1e-3", dev[1e-3], 0.05),
        _below("oja_bridge_eta=5e-4", dev[5e-4], dev[1e-3], detail="must beat eta=1e-3"),
    ]


SUITE: dict[str, Callable] = {
    "sld": check_sld,
    "metric_forms": check_metric_forms,
    "pullback": check_pullback,
    "gradient": check_gradient,
    "conjugacy": check_conjugacy,
    "replicator": check_replicator,
    "drift": check_drift,
    "orders": check_orders,
    "pca": check_pca,
    "stochastic_bridge": check_stochastic_bridge,
}


def run_suite(names=None) -> list[CheckResult]:
    results = []
    for name in names or SUITE:
        t0 = time.perf_counter()
        res = SUITE[name]()
        elapsed = time.perf_counter() - t0
        if isinstance(res, CheckResult):
            res = [res]
        for r in res:
            r.seconds = elapsed / len(res)
        results.extend(res)
    return results
