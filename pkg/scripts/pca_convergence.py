"""How fast the leading component takes over, for a few spectra; prints 1 - |w_J| along the run."""
import numpy as np

from qisflow.flow import IntegratorConfig, integrate_qis, integrate_sphere
from qisflow.sphere import random_sphere_state

SPECTRA = ([3.0, 2.0, 1.0], [1.0, 0.5, 0.2, 0.1], [0.4, 1.5, 0.9, 1.1, 0.2])


def main(seed=6):
    rng = np.random.default_rng(seed)
    for c in map(np.asarray, SPECTRA):
        top = np.sort(c)[::-1]
        T = 30.0 / (top[0] - top[1])
        J = int(np.argmax(c))
        w0 = random_sphere_state(c.size, rng)
        cfg = IntegratorConfig("rk4", 1e-2, T, sample_stride=int(round(T / 1e-2)) // 6)
        sph = integrate_sphere(w0, c, cfg)
        qis = integrate_qis(np.diag(w0 * w0), c, cfg, positivity_floor=0.0)
        print(f"c = {c.tolist()}  T = {T:g}")
        for t, w, rho in zip(sph.times, sph.states, qis.states):
            print(f"  t={t:8.3f}  1-|w_J| {1 - abs(w[J]):.3e}  1-theta_J {1 - rho[J, J].real:.3e}")


if __name__ == "__main__":
    main()
