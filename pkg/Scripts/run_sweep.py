"""
run_sweep.py

Run one configuration over several seeds in parallel processes.

This script is intentionally thin:
- No simulation logic
- No configuration logic beyond CLI args

Usage:
    python -m Scripts.run_sweep \
        --config configs/default.yaml \
        --seeds 0 1 2 3 \
        --out outputs/sweep
"""

import argparse
import sys

from src.config.settings import load_config
from src.services.orchestrator import run_sweep


def parse_args() -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(description="Run a seed sweep")

    parser.add_argument("--config", required=True, help="Path to YAML config")
    parser.add_argument("--seeds", required=True, type=int, nargs="+", help="Seeds to run")
    parser.add_argument("--out", required=True, help="Sweep directory (one bundle per seed)")
    parser.add_argument("--workers", type=int, default=None, help="Worker processes")

    return parser.parse_args()


def main() -> None:
    args = parse_args()

    print("=" * 60)
    print("Running Seed Sweep")
    print("=" * 60)

    results = run_sweep(load_config(args.config), args.seeds, args.out, args.workers)

    for row in results:
        print(f"seed={row['seed']} records={row['n_records']:,} minted={row['minted_total']:.2f} -> {row['out_dir']}")
    print("=" * 60)


if __name__ == "__main__":
    try:
        main()
    except Exception as exc:
        print(f"\nSweep failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        sys.exit(1)
