import numpy as np
import pytest

from src.genome.mutation import copy_hash_segment, delete_at, insert_at, mutate
from src.genome.representation import (
    Genome,
    MutationRates,
    genome_from_parts,
    letters_from_indices,
    new_genome,
    universal_hash,
)


def _genome(hash_genes="xxyyzz"):
    return genome_from_parts([0.4, 0.4], [[0.5, 0.5], [0.2, 0.7]], hash_genes, 0.3)


def test_new_genome_is_deterministic():
    assert new_genome(7, 2, 1, 8) == new_genome(7, 2, 1, 8)


def test_new_genome_differs_across_seeds():
    assert new_genome(7, 2, 1, 8).hash_genes != new_genome(8, 2, 1, 8).hash_genes


def test_new_genome_minimal_sizes():
    g = new_genome(0, 1, 1, 1)

    assert g.n_dims == 1
    assert g.n_anchors == 1
    assert len(g.hash_genes) == 1
    assert all(0.0 <= x <= 1.0 for x in g.structural_genes)
    assert 0.0 <= g.flexibility_gene <= 1.0


def test_new_genome_rejects_zero_sizes():
    with pytest.raises(ValueError):
        new_genome(0, 2, 0, 8)


def test_genome_segments():
    g = _genome()

    assert g.extents == (0.4, 0.4)
    assert g.anchors == ((0.5, 0.5), (0.2, 0.7))
    assert g.n_anchors == 2


def test_genome_rejects_non_alphabetic_hash():
    with pytest.raises(ValueError):
        Genome(n_dims=1, structural_genes=(0.5, 0.5), hash_genes="ab1", flexibility_gene=0.5)


def test_mutate_with_zero_rates_is_identity():
    g = new_genome(3, 2, 3, 16)

    assert mutate(g, MutationRates(), rng_seed=99) == g


def test_delete_at_shifts_downstream():
    assert delete_at("xxyyzz", 0) == "xyyzz"


def test_insert_at_shifts_downstream():
    assert insert_at("xxyyzz", 2, "a") == "xxayyzz"


def test_full_substitution_replays_seeded_draw():
    g = _genome("aaaa")
    mutated = mutate(g, MutationRates(substitution_rate=1.0), rng_seed=5)

    rng = np.random.default_rng(5)
    rng.random(4)
    expected = letters_from_indices(rng.integers(0, 26, size=4))

    assert mutated.hash_genes == expected
    assert mutated.structural_genes == g.structural_genes


def test_mutate_keeps_genes_in_unit_interval():
    g = new_genome(11, 2, 3, 16)
    rates = MutationRates(anchor_jitter_sd=0.5, flexibility_jitter_sd=0.5)

    mutated = mutate(g, rates, rng_seed=1)

    assert all(0.0 <= x <= 1.0 for x in mutated.structural_genes)
    assert 0.0 <= mutated.flexibility_gene <= 1.0
    assert mutated.extents == g.extents


def test_mutate_never_empties_hash():
    g = _genome("abc")
    mutated = mutate(g, MutationRates(deletion_rate=1.0), rng_seed=0)

    assert len(mutated.hash_genes) == 1


def test_mutation_rates_reject_out_of_domain():
    with pytest.raises(ValueError):
        MutationRates(substitution_rate=1.5)
    with pytest.raises(ValueError):
        MutationRates(anchor_jitter_sd=-0.1)


def test_copy_hash_segment_replaces_only_hash():
    source = _genome("abc")
    target = genome_from_parts([0.2, 0.2], [[0.9, 0.9]], "zzz", 0.7)

    result = copy_hash_segment(source, target)

    assert result.hash_genes == "abc"
    assert result.anchors == target.anchors
    assert result.flexibility_gene == target.flexibility_gene


def test_copy_hash_segment_identity():
    g = _genome()

    assert copy_hash_segment(g, g) == g


def test_universal_hash_holds_every_bigram():
    text = universal_hash()
    letters = "abcdefghijklmnopqrstuvwxyz"

    assert len(text) == 26 * 26 + 1
    assert all(a + b in text for a in letters for b in letters)
