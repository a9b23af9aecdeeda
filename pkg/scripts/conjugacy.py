"""Integrate both flows from matched starts and print the deviation over time.

    python scripts/conjugacy.py --m 5 --seed 4 --t-max 5
"""
import argparse

import numpy as np

from qisflow.flow import IntegratorConfig, conjugacy_trajectories
from qisflow.sphere import random_sphere_state


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--seed", type=int, default=4)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--t-max", type=float, default=5.0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    c = np.sort(rng.uniform(0.5, 2.0, args.m))[::-1]
    w0 = random_sphere_state(args.m, rng)
    cfg = IntegratorConfig("rk4", args.dt, args.t_max, sample_stride=int(round(0.5 / args.dt)))
    sph, qis, dev = conjugacy_trajectories(w0, c, cfg)

    print("c =", np.round(c, 4))
    print(f"{'t':>6} {'|w_1|^2':>12} {'rho_11':>12} {'deviation':>11}")
    for t, w, rho, d in zip(sph.times, sph.states, qis.states, dev):
        print(f"{t:6.2f} {w[0] ** 2:12.9f} {rho[0, 0].real:12.9f} {d:11.2e}")
    print(f"sup deviation {dev.max():.3e}")


if __name__ == "__main__":
    main()
