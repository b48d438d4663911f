"""
convergence_experiment.py

Compare settled-price dispersion of a homogeneous population with a
two-cluster population under the same seed.

Usage:
    python -m Scripts.convergence_experiment --seed 0 --size 50 --ticks 200 --spread 0.02
"""

import argparse

from src.services.orchestrator import run_convergence_experiment


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Convergence vs divergence experiment")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--size", type=int, default=50)
    parser.add_argument("--ticks", type=int, default=200)
    parser.add_argument("--spread", type=float, default=0.02, help="anchor scatter sd within each cluster")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    outcome = run_convergence_experiment(args.seed, args.size, args.ticks, args.spread)

    print("=" * 60)
    print(f"Homogeneous price CV:  {outcome['homogeneous']:.4f}")
    print(f"Two-cluster price CV:  {outcome['two_clusters']:.4f}")
    print("=" * 60)


if __name__ == "__main__":
    main()
