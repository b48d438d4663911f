"""
Genotypic Representation of an Agent.

A genome carries three gene segments:
    - structural genes: n dimension extents followed by m anchor points
      in n dimensions, all reals in [0, 1]
    - hash genes: the endogenous alphabetic string (a-z) matched by the
      value cipher
    - flexibility gene: a single real in [0, 1] (inherent mental flexibility)

Genomes are immutable values; every operator returns a new genome.

Usage:
    from src.genome.representation import new_genome, universal_hash

    genome = new_genome(rng_seed=7, n_dims=2, n_anchors=3, hash_len=32)
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.utils.constants import ALPHABET


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class Genome:
    """
    Three-segment genome.

    Attributes:
        n_dims: Number of concept-space dimensions encoded.
        structural_genes: n extents followed by n_anchors * n anchor coordinates.
        hash_genes: Endogenous alphabetic string.
        flexibility_gene: Inherent mental flexibility.
    """
    n_dims: int
    structural_genes: Tuple[float, ...]
    hash_genes: str
    flexibility_gene: float

    def __post_init__(self) -> None:
        if self.n_dims < 1:
            raise ValueError(f"n_dims must be >= 1, got {self.n_dims}")
        n_structural = len(self.structural_genes)
        if n_structural < 2 * self.n_dims or n_structural % self.n_dims:
            raise ValueError(
                f"structural_genes must hold n extents plus m*n anchors, "
                f"got {n_structural} genes for n_dims={self.n_dims}"
            )
        if any(not 0.0 <= g <= 1.0 for g in self.structural_genes):
            raise ValueError("structural genes must lie in [0, 1]")
        if not self.hash_genes or any(c not in ALPHABET for c in self.hash_genes):
            raise ValueError(
                f"hash_genes must be a non-empty a-z string, got {self.hash_genes!r}"
            )
        if not 0.0 <= self.flexibility_gene <= 1.0:
            raise ValueError(
                f"flexibility_gene must lie in [0, 1], got {self.flexibility_gene}"
            )

    @property
    def n_anchors(self) -> int:
        return len(self.structural_genes) // self.n_dims - 1

    @property
    def extents(self) -> Tuple[float, ...]:
        return self.structural_genes[: self.n_dims]

    @property
    def anchors(self) -> Tuple[Tuple[float, ...], ...]:
        genes = self.structural_genes[self.n_dims:]
        n = self.n_dims
        return tuple(tuple(genes[i:i + n]) for i in range(0, len(genes), n))


@dataclass(frozen=True)
class MutationRates:
    """
    Per-event mutation parameters.

    Attributes:
        substitution_rate: Per-character probability of resampling a letter.
        insertion_rate: Per-position probability of inserting a letter (frame-shift).
        deletion_rate: Per-character probability of deleting it (frame-shift).
        anchor_jitter_sd: Gaussian sd added to anchor genes.
        flexibility_jitter_sd: Gaussian sd added to the flexibility gene.
    """
    substitution_rate: float = 0.0
    insertion_rate: float = 0.0
    deletion_rate: float = 0.0
    anchor_jitter_sd: float = 0.0
    flexibility_jitter_sd: float = 0.0

    def __post_init__(self) -> None:
        for name in ("substitution_rate", "insertion_rate", "deletion_rate"):
            rate = getattr(self, name)
            if not np.isfinite(rate) or not 0.0 <= rate <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {rate}")
        for name in ("anchor_jitter_sd", "flexibility_jitter_sd"):
            sd = getattr(self, name)
            if not np.isfinite(sd) or sd < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {sd}")

    @property
    def is_zero(self) -> bool:
        return not any((
            self.substitution_rate,
            self.insertion_rate,
            self.deletion_rate,
            self.anchor_jitter_sd,
            self.flexibility_jitter_sd,
        ))


# =============================================================================
# CONSTRUCTION
# =============================================================================

def letters_from_indices(indices: Sequence[int]) -> str:
    """Map integer letter indices (0..25) to an a-z string."""
    return "".join(ALPHABET[int(i)] for i in indices)


def new_genome(rng_seed: int, n_dims: int, n_anchors: int, hash_len: int) -> Genome:
    """
    Build a random genome from a seed.

    Draw order: structural genes (uniform), hash letters, flexibility.

    Args:
        rng_seed: Seed of the construction draw.
        n_dims: Concept-space dimensionality (>= 1).
        n_anchors: Number of anchor points (>= 1).
        hash_len: Length of the endogenous string (>= 1).

    Returns:
        Genome satisfying all invariants.

    Raises:
        ValueError: If any size is zero or negative.
    """
    for label, size in (("n_dims", n_dims), ("n_anchors", n_anchors), ("hash_len", hash_len)):
        if size < 1:
            raise ValueError(f"{label} must be >= 1, got {size}")

    rng = np.random.default_rng(rng_seed)
    structural = rng.random(n_dims + n_anchors * n_dims)
    letters = rng.integers(0, len(ALPHABET), size=hash_len)
    flexibility = rng.random()

    return Genome(
        n_dims=n_dims,
        structural_genes=tuple(float(g) for g in structural),
        hash_genes=letters_from_indices(letters),
        flexibility_gene=float(flexibility),
    )


def genome_from_parts(
    extents: Sequence[float],
    anchors: Sequence[Sequence[float]],
    hash_genes: str,
    flexibility: float,
) -> Genome:
    """
    Assemble a genome from explicit segments (clusters, scenarios, tests).

    Structural values are clamped into [0, 1].
    """
    n_dims = len(extents)
    genes = list(extents)
    for anchor in anchors:
        if len(anchor) != n_dims:
            raise ValueError(
                f"anchor {list(anchor)} does not match {n_dims} dimensions"
            )
        genes.extend(anchor)

    return Genome(
        n_dims=n_dims,
        structural_genes=tuple(float(np.clip(g, 0.0, 1.0)) for g in genes),
        hash_genes=hash_genes,
        flexibility_gene=float(np.clip(flexibility, 0.0, 1.0)),
    )


def universal_hash(order: int = 2) -> str:
    """
    De Bruijn string over a-z containing every word of length `order`.

    A genome carrying it passes the hash gate for every value whose
    encoding has at most `order` characters (0..675 for order 2).
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")

    k = len(ALPHABET)
    a = [0] * (k * order)
    sequence = []

    def _db(t: int, p: int) -> None:
        if t > order:
            if order % p == 0:
                sequence.extend(a[1:p + 1])
        else:
            a[t] = a[t - p]
            _db(t + 1, p)
            for j in range(a[t - p] + 1, k):
                a[t] = j
                _db(t + 1, t)

    _db(1, 1)
    # Unroll the cycle so every window also appears in the linear string.
    sequence.extend(sequence[: order - 1])
    return letters_from_indices(sequence)
