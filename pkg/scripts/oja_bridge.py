"""Averaged Oja learning against the deterministic flow, for decreasing learning rates.

    python scripts/oja_bridge.py --runs 100 --t-max 100
"""
import argparse

import numpy as np

from qisflow.oja import CorrelationModel, compare_with_aleh


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--t-max", type=float, default=100.0)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--variant", choices=("truncated", "normalized"), default="truncated")
    ap.add_argument("--samples", type=int, default=2000, help="samples per trajectory")
    args = ap.parse_args()

    w0 = np.ones(2) / np.sqrt(2)
    for eta in (4e-3, 2e-3, 1e-3, 5e-4):
        steps = int(round(args.t_max / eta))
        stride = max(1, steps // args.samples)
        steps -= steps % stride
        res = compare_with_aleh(CorrelationModel([2.0, 1.0], eta), w0, steps, args.runs, args.seed, args.variant, stride=stride)
        print(f"eta={eta:<7g} steps={steps:<7d} sup deviation {res.deviation:.4f}  final mean w {np.round(res.mean_w[-1], 4)}")


if __name__ == "__main__":
    main()
