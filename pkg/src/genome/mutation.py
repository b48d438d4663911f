"""
Genome Mutation Operators.

Seeded, pure operators over immutable genomes:
    - per-character substitution on the endogenous string
    - insertion / deletion events that frame-shift the downstream string
    - Gaussian jitter on anchor genes and on the flexibility gene, clamped to [0, 1]
    - hash-segment copying (the imitation primitive)

Usage:
    from src.genome.mutation import mutate, copy_hash_segment
"""

from dataclasses import replace

import numpy as np

from src.genome.representation import Genome, MutationRates, letters_from_indices
from src.utils.constants import ALPHABET


# =============================================================================
# FRAME-SHIFT PRIMITIVES
# =============================================================================

def insert_at(hash_genes: str, index: int, letter: str) -> str:
    """Insert one letter before `index`; the suffix shifts right by one."""
    if letter not in ALPHABET or len(letter) != 1:
        raise ValueError(f"letter must be a single a-z character, got {letter!r}")
    if not 0 <= index <= len(hash_genes):
        raise ValueError(f"index {index} outside 0..{len(hash_genes)}")
    return hash_genes[:index] + letter + hash_genes[index:]


def delete_at(hash_genes: str, index: int) -> str:
    """Delete the letter at `index`; the suffix shifts left by one."""
    if not 0 <= index < len(hash_genes):
        raise ValueError(f"index {index} outside 0..{len(hash_genes) - 1}")
    if len(hash_genes) == 1:
        raise ValueError("cannot delete the last remaining hash gene")
    return hash_genes[:index] + hash_genes[index + 1:]


# =============================================================================
# PUBLIC API
# =============================================================================

def mutate(g: Genome, rates: MutationRates, rng_seed: int) -> Genome:
    """
    Return a mutated copy of a genome.

    Draw order (fixed, so runs replay exactly):
        1. substitution mask  rng.random(L)
        2. substitution letters  rng.integers(0, 26, L)
        3. insertion mask  rng.random(L)
        4. insertion letters  rng.integers(0, 26, L)
        5. deletion mask  rng.random(L)
        6. anchor jitter  rng.normal(0, sd, n_anchors * n)   (only when sd > 0)
        7. flexibility jitter  rng.normal(0, sd)              (only when sd > 0)

    The string is rebuilt left to right: an insertion at position i lands
    before the (possibly deleted) character i. If every character is
    deleted, the first substituted character survives.

    Args:
        g: Source genome (left untouched).
        rates: Mutation parameters.
        rng_seed: Seed of this mutation event.

    Returns:
        New Genome.
    """
    rng = np.random.default_rng(rng_seed)
    length = len(g.hash_genes)

    substitute = rng.random(length) < rates.substitution_rate
    replacements = rng.integers(0, len(ALPHABET), size=length)
    letters = [
        letters_from_indices([replacements[i]]) if substitute[i] else c
        for i, c in enumerate(g.hash_genes)
    ]

    insert = rng.random(length) < rates.insertion_rate
    inserted = rng.integers(0, len(ALPHABET), size=length)
    delete = rng.random(length) < rates.deletion_rate

    rebuilt = []
    for i, letter in enumerate(letters):
        if insert[i]:
            rebuilt.append(letters_from_indices([inserted[i]]))
        if not delete[i]:
            rebuilt.append(letter)
    hash_genes = "".join(rebuilt) or letters[0]

    structural = g.structural_genes
    if rates.anchor_jitter_sd > 0.0:
        extents = np.asarray(structural[: g.n_dims])
        anchors = np.asarray(structural[g.n_dims:])
        anchors = np.clip(
            anchors + rng.normal(0.0, rates.anchor_jitter_sd, size=anchors.size),
            0.0,
            1.0,
        )
        structural = tuple(float(x) for x in np.concatenate([extents, anchors]))

    flexibility = g.flexibility_gene
    if rates.flexibility_jitter_sd > 0.0:
        flexibility = float(
            np.clip(flexibility + rng.normal(0.0, rates.flexibility_jitter_sd), 0.0, 1.0)
        )

    return replace(
        g,
        structural_genes=structural,
        hash_genes=hash_genes,
        flexibility_gene=flexibility,
    )


def copy_hash_segment(source: Genome, target: Genome) -> Genome:
    """
    Copy the source's endogenous string into the target.

    Structural and flexibility genes of the target are untouched; the
    operation is idempotent.
    """
    if source.hash_genes == target.hash_genes:
        return target
    return replace(target, hash_genes=source.hash_genes)
