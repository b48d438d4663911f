"""
Generic Helper Utilities.

Small, reusable helper functions that are safe to use across
all layers of the system.
"""

import hashlib
import json
from typing import Any, Iterable, Mapping

import numpy as np


# =============================================================================
# SAFE UTILITIES
# =============================================================================

def canonical_json(payload: Mapping[str, Any]) -> str:
    """Serialize a mapping to compact JSON with sorted keys (stable bytes)."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def sha256_hex(text: str) -> str:
    """SHA-256 hex digest of a UTF-8 string."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def make_rng(seed: int) -> np.random.Generator:
    """
    Build the simulator's random generator.

    Every stochastic choice in the simulator draws from a generator built
    here, so one integer seed fully determines a run.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def draw_seed(rng: np.random.Generator) -> int:
    """Draw a child seed for a pure, seed-driven operation."""
    return int(rng.integers(0, 2**31 - 1))


def coefficient_of_variation(values: Iterable[float]) -> float:
    """
    Population coefficient of variation (std / |mean|).

    Returns 0.0 for fewer than two values or a zero mean.
    """
    array = np.asarray(list(values), dtype=float)
    if array.size < 2:
        return 0.0
    mean = float(array.mean())
    if mean == 0.0:
        return 0.0
    return float(array.std() / abs(mean))
