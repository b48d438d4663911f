import numpy as np
import pytest

from src.genome.mutation import mutate
from src.genome.representation import MutationRates, genome_from_parts, new_genome, universal_hash
from src.kernel.geometry import Stimulus, classify
from src.markets.records import Proposition
from src.network.agents import agent_from_genome
from src.valuation.cipher import encode_value, hash_gate, round_price
from src.valuation.gates import (
    REASON_ACCEPTED,
    REASON_HASH_FAIL,
    REASON_OUT_OF_RANGE,
    PriceInterval,
    acceptable_range,
    eq1_gate,
    full_gate,
    normalized_threshold,
)


def _agent(hash_genes):
    genome = genome_from_parts([0.4, 0.4], [[0.5, 0.5]], hash_genes, 0.2)
    return agent_from_genome(0, genome, 1000.0)


def _item():
    return Proposition(id="X", stimulus=Stimulus.of((0.5, 0.5)), base_value=100.0)


def _naive_contains(text, word):
    for start in range(len(text) - len(word) + 1):
        if text[start:start + len(word)] == word:
            return True
    return False


def _accepted_values(genome, limit):
    return {v for v in range(limit + 1) if hash_gate(genome, v)}


def test_encode_value_examples():
    assert encode_value(0) == "a"
    assert encode_value(25) == "z"
    assert encode_value(26) == "ba"
    assert encode_value(16873) == "yyz"


def test_encode_value_is_injective():
    codes = {encode_value(v) for v in range(10_001)}

    assert len(codes) == 10_001


def test_encode_value_rejects_negative():
    with pytest.raises(ValueError):
        encode_value(-1)


def test_round_price_halves_round_up():
    assert round_price(99.5) == 100
    assert round_price(2.49) == 2


def test_hash_gate_examples():
    assert hash_gate(genome_from_parts([0.5], [[0.5]], "xxyyzz", 0.1), 16873)
    assert hash_gate(genome_from_parts([0.5], [[0.5]], "abc", 0.1), 0)
    assert not hash_gate(genome_from_parts([0.5], [[0.5]], "abc", 0.1), 25)


def test_hash_gate_matches_sliding_window_oracle():
    mismatches = 0
    changed = 0

    for seed in range(20):
        genome = new_genome(seed, 2, 2, 32)
        for v in range(10_001):
            if hash_gate(genome, v) != _naive_contains(genome.hash_genes, encode_value(v)):
                mismatches += 1

        shifted = mutate(genome, MutationRates(insertion_rate=0.1, deletion_rate=0.1), rng_seed=seed)
        if _accepted_values(genome, 10_000) ^ _accepted_values(shifted, 10_000):
            changed += 1

    assert mismatches == 0
    assert changed >= 18


def test_acceptable_range_examples():
    t = acceptable_range(1.0, 100.0, 0.2)
    assert (t.lo, t.hi) == pytest.approx((80.0, 120.0))

    zero = acceptable_range(0.0, 100.0, 0.2)
    assert (zero.lo, zero.hi) == (0.0, 0.0)

    exact = acceptable_range(0.5, 100.0, 0.0)
    assert exact.lo == exact.hi == 50.0


def test_acceptable_range_rejects_bad_inputs():
    with pytest.raises(ValueError):
        acceptable_range(1.2, 100.0, 0.2)
    with pytest.raises(ValueError):
        acceptable_range(0.5, 0.0, 0.2)


def test_eq1_gate_examples():
    t = PriceInterval(80.0, 120.0)

    assert eq1_gate(t, 100.0).accepted == 1
    assert eq1_gate(t, 120.0).accepted == 1
    assert eq1_gate(t, 130.0).accepted == 0
    assert eq1_gate(t, 130.0).reason == REASON_OUT_OF_RANGE


def test_eq1_gate_matches_interval_membership_oracle():
    rng = np.random.default_rng(1)
    mismatches = 0

    for _ in range(10_000):
        lo = float(rng.uniform(0, 500))
        hi = lo + float(rng.uniform(0, 500))
        t = PriceInterval(lo, hi)
        for x in (float(rng.uniform(0, 1200)), lo, hi):
            expected = 1 if lo <= x <= hi else 0
            mismatches += eq1_gate(t, x).accepted != expected

    for _ in range(50):
        lo = float(rng.uniform(0, 800))
        t = PriceInterval(lo, lo + float(rng.uniform(0, 300)))
        for price in range(1001):
            expected = 1 if t.lo <= price <= t.hi else 0
            mismatches += eq1_gate(t, float(price)).accepted != expected

    assert mismatches == 0


def test_normalized_threshold_brackets_one_when_accepted():
    t = PriceInterval(80.0, 120.0)

    k_lo, k_hi = normalized_threshold(t, 100.0)

    assert k_lo <= 1.0 <= k_hi


def test_full_gate_both_stages_pass():
    assert full_gate(_agent(universal_hash()), _item(), 100.0).reason == REASON_ACCEPTED


def test_full_gate_price_out_of_range():
    assert full_gate(_agent(universal_hash()), _item(), 130.0).reason == REASON_OUT_OF_RANGE


def test_full_gate_hash_checked_first():
    assert full_gate(_agent("abc"), _item(), 100.0).reason == REASON_HASH_FAIL


def test_full_gate_matches_stage_by_stage_oracle():
    rng = np.random.default_rng(7)
    mismatches = []
    reasons = set()

    for i in range(1000):
        genome = new_genome(int(rng.integers(0, 2**31 - 1)), 2, int(rng.integers(1, 4)), 32)
        if i % 2 == 0:
            genome = genome_from_parts(genome.extents, genome.anchors, universal_hash(), genome.flexibility_gene)
        agent = agent_from_genome(0, genome, 1000.0)
        item = Proposition(id="X", stimulus=Stimulus.of(rng.uniform(0, 1, size=2)), base_value=float(rng.uniform(10, 500)))

        a_x = classify(agent.kernel, item.stimulus)
        perceived = item.base_value * a_x
        x_j = perceived * float(rng.uniform(0.6, 1.4)) if i % 3 else float(rng.uniform(0, 600))

        if not _naive_contains(genome.hash_genes, encode_value(round_price(x_j))):
            expected = REASON_HASH_FAIL
        else:
            t = acceptable_range(a_x, item.base_value, genome.flexibility_gene)
            expected = REASON_ACCEPTED if t.lo <= x_j <= t.hi else REASON_OUT_OF_RANGE

        decision = full_gate(agent, item, x_j)
        reasons.add(decision.reason)
        if decision.reason != expected:
            mismatches.append((i, x_j, decision.reason, expected))

    assert mismatches == []
    assert reasons == {REASON_HASH_FAIL, REASON_OUT_OF_RANGE, REASON_ACCEPTED}


def test_eq1_gate_agrees_with_normalized_threshold():
    rng = np.random.default_rng(11)
    disagreements = 0

    for _ in range(5000):
        lo = float(rng.uniform(0, 300)) if rng.random() > 0.1 else 0.0
        t = PriceInterval(lo, lo + float(rng.uniform(0, 300)))
        for x_j in (float(rng.uniform(0.01, 800)), t.lo or 1.0, t.hi or 1.0):
            k_lo, k_hi = normalized_threshold(t, x_j)
            normalized = 1 if k_lo <= 1.0 <= k_hi else 0
            disagreements += eq1_gate(t, x_j).accepted != normalized

    assert disagreements == 0


def test_widening_the_range_never_flips_an_acceptance():
    rng = np.random.default_rng(13)
    flips = 0
    accepted = 0

    for _ in range(5000):
        a_x = float(rng.random())
        base = float(rng.uniform(1, 500))
        narrow, wide = sorted(float(f) for f in rng.random(2))
        x_j = base * a_x * float(rng.uniform(0.5, 1.5))

        if eq1_gate(acceptable_range(a_x, base, narrow), x_j).accepted:
            accepted += 1
            flips += eq1_gate(acceptable_range(a_x, base, wide), x_j).accepted == 0

        t = PriceInterval(float(rng.uniform(0, 100)), float(rng.uniform(100, 200)))
        if eq1_gate(t, x_j).accepted:
            widened = PriceInterval(max(0.0, t.lo - float(rng.uniform(0, 50))), t.hi + float(rng.uniform(0, 50)))
            flips += eq1_gate(widened, x_j).accepted == 0

    assert flips == 0
    assert accepted > 100


def test_acceptable_range_center_rises_with_a_x():
    rng = np.random.default_rng(17)

    for _ in range(2000):
        low, high = sorted(float(a) for a in rng.random(2))
        high = min(1.0, high + 1e-3)
        base = float(rng.uniform(1, 500))
        flexibility = float(rng.random())

        lower = acceptable_range(low, base, flexibility).center
        upper = acceptable_range(high, base, flexibility).center

        assert upper > lower
        assert lower == pytest.approx(base * low)
