"""Global error at t=1 against the closed-form replicator solution, for a ladder of step sizes."""
import numpy as np

from qisflow.flow import IntegratorConfig, integrate_qis, integrate_sphere, replicator_oracle

C = [2.0, 1.0]
S = 1 / np.sqrt(2)


def errors(method, dt):
    cfg = IntegratorConfig(method, dt, 1.0, sample_stride=1)
    exact = replicator_oracle([0.5, 0.5], C, 1.0)[0]
    e_sph = abs(integrate_sphere([S, S], C, cfg).final[0] ** 2 - exact)
    e_qis = abs(integrate_qis(np.diag([0.5, 0.5]), C, cfg).final[0, 0].real - exact)
    return e_sph, e_qis


def main():
    for method, dts in (("euler", [4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3]), ("rk4", [2e-1, 1e-1, 5e-2, 2.5e-2, 1.25e-2])):
        print(method)
        prev = None
        for dt in dts:
            e = np.array(errors(method, dt))
            ratio = "" if prev is None else "  ratio " + " ".join(f"{r:6.2f}" for r in prev / e)
            print(f"  dt={dt:<8g} sphere {e[0]:.3e}  qis {e[1]:.3e}{ratio}")
            prev = e


if __name__ == "__main__":
    main()
