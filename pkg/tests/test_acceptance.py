"""Acceptance criteria, one printed pass/fail line each (run with ``pytest -s`` to see them)."""
import shutil
import subprocess
import sys
import time


from qisflow import verify

LINES = []


def report(number, title, results, budget=None, elapsed=None):
    ok = all(r.passed for r in results)
    if budget is not None:
        ok = ok and elapsed < budget
    parts = "; ".join(f"{r.name}={r.value:.3e}" for r in results)
    timing = f" [{elapsed:.1f}s/{budget:.0f}s]" if budget is not None else ""
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title}: {parts}{timing}"
    print("\n" + line)
    LINES.append(line)
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return (out if isinstance(out, list) else [out]), time.perf_counter() - t0


def test_01_sld_residual():
    res, dt = timed(verify.check_sld)
    assert report(1, "SLD residual < 1e-9, m in {2,3,5}", res, 5.0, dt)


def test_02_metric_equivalence():
    res, _ = timed(verify.check_metric_forms)
    assert report(2, "trace vs eigenbasis metric < 1e-10", res)


def test_03_pullback():
    res, _ = timed(verify.check_pullback)
    assert report(3, "metric pullback factor 4 within 1e-9 relative", res)


def test_04_gradient_property():
    res, _ = timed(verify.check_gradient)
    assert report(4, "gradient defining property < 1e-6", res)


def test_05_conjugacy():
    res, dt = timed(verify.check_conjugacy)
    assert report(5, "squared sphere flow vs density flow < 1e-7", res, 10.0, dt)


def test_06_replicator():
    res, _ = timed(verify.check_replicator)
    assert report(6, "theta_1(1) = 0.880797 within 1e-6", res)


def test_07_invariant_drift():
    res, _ = timed(verify.check_drift)
    assert report(7, "norm/trace drift < 1e-8, hermiticity < 1e-10", res)


def test_08_integrator_orders():
    res, _ = timed(verify.check_orders)
    assert report(8, "halving ratios Euler [1.8,2.2], RK4 [12,20]", res)


def test_09_pca_convergence():
    res, _ = timed(verify.check_pca)
    assert report(9, "top component within 1e-6 of 1 at T = 30/gap", res)


def test_10_stochastic_bridge():
    res, dt = timed(verify.check_stochastic_bridge)
    assert report(10, "averaged Oja vs flow < 0.05, smaller at eta/2", res, 60.0, dt)


def test_11_determinism(tmp_path):
    exe = shutil.which("qisflow")
    cmd = [exe] if exe else [sys.executable, "-m", "qisflow"]
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"experiment": "conjugacy", "m": 3, "c": [2.0, 1.0, 0.5], "seed": 7,'
                   ' "initial": {"random": {}}, "integrator": {"t_max": 2.0}}')
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}.csv"
        proc = subprocess.run([*cmd, "run", str(cfg), "--output", str(out)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    same = outs[0] == outs[1] and len(outs[0]) > 0
    res = [verify.CheckResult("identical_bytes", float(same), 1.0, same)]
    assert report(11, "two CLI runs give byte-identical CSV", res)
