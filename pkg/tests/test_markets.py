import pytest

from src.genome.representation import genome_from_parts, universal_hash
from src.kernel.geometry import Stimulus, classify
from src.markets.compositional import (
    AuctionRoundResult,
    auction_round,
    feedback_adjust,
    link,
)
from src.markets.minimal import net_gain, propose_trade, settle_pairwise
from src.markets.records import (
    KIND_BID,
    KIND_COMPLETE,
    MARKET_COMPOSITIONAL,
    REASON_IMITATION,
    REASON_INSUFFICIENT_FUNDS,
    ImitationSignal,
    Proposition,
)
from src.network.agents import agent_from_genome
from src.valuation.cipher import encode_value
from src.valuation.gates import REASON_OUT_OF_RANGE, acceptable_range


def _agent(agent_id, center=(0.5, 0.5), width=0.4, flexibility=0.2, balance=1000.0):
    genome = genome_from_parts([width] * len(center), [list(center)], universal_hash(), flexibility)
    return agent_from_genome(agent_id, genome, balance)


def _prop(prop_id="X", coords=(0.5, 0.5), base_value=100.0):
    return Proposition(id=prop_id, stimulus=Stimulus.of(coords), base_value=base_value)


def _result(ensemble, rate):
    return AuctionRoundResult(
        ensemble_id=ensemble.id,
        round=ensemble.round,
        decisions={},
        acceptance_rate=rate,
        fills=(),
    )


# -----------------------------------------------------------------------------
# Minimal market
# -----------------------------------------------------------------------------

def test_net_gain_examples():
    assert net_gain(120.0, 100.0) == pytest.approx(20.0)
    assert net_gain(100.0, 100.0) == 0.0
    assert net_gain(80.0, 100.0) == pytest.approx(-20.0)
    assert net_gain(50.0, 0.0) == 0.0


def test_propose_trade_asks_perceived_value():
    seller = _agent(1)
    seller.receive("X")

    offer = propose_trade(seller, _prop())

    assert offer.ask == pytest.approx(100.0)
    assert offer.seller_id == 1


def test_propose_trade_unfamiliar_seller_asks_zero():
    seller = _agent(1, center=(0.9, 0.9), width=0.1)
    seller.receive("X")

    assert propose_trade(seller, _prop()).ask == 0.0


def test_identical_sellers_ask_the_same():
    a, b = _agent(1), _agent(2)
    a.receive("X")
    b.receive("X")

    assert propose_trade(a, _prop()).ask == propose_trade(b, _prop()).ask


def test_propose_trade_requires_holding():
    with pytest.raises(ValueError):
        propose_trade(_agent(1), _prop())


def test_settle_overlapping_intervals_completes_at_midpoint():
    buyer, seller = _agent(0), _agent(1)
    seller.receive("X")
    item = _prop()

    record = settle_pairwise(buyer, seller, propose_trade(seller, item), False, proposition=item, tick=1)

    assert record.kind == KIND_COMPLETE
    assert record.price == pytest.approx(100.0)
    assert buyer.holdings["X"] == 1
    assert "X" not in seller.holdings
    assert buyer.balance == pytest.approx(900.0)
    assert seller.balance == pytest.approx(1100.0)
    assert record.minted == 0.0


def test_settle_unfamiliar_buyer_bids():
    buyer = _agent(0, center=(0.9, 0.9), width=0.1)
    seller = _agent(1)
    seller.receive("X")
    item = _prop()

    record = settle_pairwise(buyer, seller, propose_trade(seller, item), False, proposition=item, tick=1)

    assert record.kind == KIND_BID
    assert record.reason == REASON_OUT_OF_RANGE
    assert seller.holdings["X"] == 1
    assert buyer.balance == 1000.0


def test_settle_mints_shortfall_when_allowed():
    buyer, seller = _agent(0, balance=0.0), _agent(1)
    seller.receive("X")
    item = _prop()

    record = settle_pairwise(buyer, seller, propose_trade(seller, item), True, proposition=item, tick=1)

    assert record.kind == KIND_COMPLETE
    assert record.minted == pytest.approx(100.0)
    assert buyer.balance == pytest.approx(0.0)


def test_settle_without_funds_records_bid():
    buyer, seller = _agent(0, balance=10.0), _agent(1)
    seller.receive("X")
    item = _prop()

    record = settle_pairwise(buyer, seller, propose_trade(seller, item), False, proposition=item, tick=1)

    assert record.kind == KIND_BID
    assert record.reason == REASON_INSUFFICIENT_FUNDS
    assert buyer.balance == 10.0
    assert seller.holdings["X"] == 1


def test_settle_imitation_pays_observed_price():
    buyer = _agent(0, center=(0.9, 0.9), width=0.1)
    seller = _agent(1)
    seller.receive("X")
    item = _prop()
    signal = ImitationSignal(source_id=4, price=90.0, perceived_value=108.0)

    record = settle_pairwise(
        buyer, seller, propose_trade(seller, item), False, proposition=item, tick=2, imitation=signal
    )

    assert record.kind == KIND_COMPLETE
    assert record.imitation is True
    assert record.reason == REASON_IMITATION
    assert record.price == 90.0
    assert record.gain_buyer_pct == pytest.approx(20.0)
    assert record.buyer_perceived_value == pytest.approx(108.0)


def test_specialist_buys_from_generalist_at_overlap_center():
    buyer = _agent(0, flexibility=0.2)
    seller = _agent(1, center=(0.55, 0.55), width=1.0, flexibility=0.2)
    seller.receive("X")
    item = _prop(base_value=120.0)
    seller_value = acceptable_range(classify(seller.kernel, item.stimulus), 120.0, 0.2)

    record = settle_pairwise(buyer, seller, propose_trade(seller, item), False, proposition=item, tick=1)

    assert record.kind == KIND_COMPLETE
    assert record.price == pytest.approx((96.0 + min(144.0, seller_value.hi)) / 2.0)
    assert record.gain_buyer_pct > 0


# -----------------------------------------------------------------------------
# Compositional market
# -----------------------------------------------------------------------------

def test_link_prices_sum_of_base_values():
    props = [_prop("A", base_value=10.0), _prop("B", base_value=20.0), _prop("C", base_value=30.0)]

    assert link(0, props, 1.0).offer_price == pytest.approx(60.0)
    assert link(0, props, 1.5).offer_price == pytest.approx(90.0)
    assert link(0, props, 1.0).id == "A+B+C"


def test_link_rejects_single_member():
    with pytest.raises(ValueError):
        link(0, [_prop("A")], 1.0)


def test_link_rejects_duplicate_members():
    with pytest.raises(ValueError):
        link(0, [_prop("A"), _prop("A")], 1.0)


def test_auction_round_unfamiliar_population_rejects():
    ensemble = link(0, [_prop("A", base_value=20.0), _prop("B", base_value=40.0)], 1.0)
    agents = [_agent(i, center=(0.1, 0.1), width=0.1) for i in range(4)]

    result = auction_round(ensemble, agents, tick=5)

    assert result.acceptance_rate == 0.0
    assert result.fills == ()
    assert len(result.records) == 4
    assert all(r.market == MARKET_COMPOSITIONAL for r in result.records)


def test_auction_round_identical_population_accepts():
    ensemble = link(0, [_prop("A", base_value=20.0), _prop("B", base_value=40.0)], 1.0)
    agents = [_agent(i) for i in range(4)]

    result = auction_round(ensemble, agents, tick=5)

    assert result.acceptance_rate == 1.0
    assert result.fills == (0, 1, 2, 3)
    assert all(a.ensemble_shares[ensemble.id] == 1 for a in agents)
    # the operator paid itself once and received three payments
    assert agents[0].balance == pytest.approx(1000.0 + 3 * 60.0)
    assert agents[1].balance == pytest.approx(940.0)


def test_auction_round_matches_per_agent_oracle():
    ensemble = link(0, [_prop("A", (0.4, 0.4), 30.0), _prop("B", (0.6, 0.6), 50.0)], 1.0)
    centers = [(0.5, 0.5), (0.45, 0.55), (0.2, 0.2), (0.8, 0.5), (0.5, 0.7), (0.9, 0.9)]
    agents = [
        _agent(i, center=c, width=0.5, flexibility=0.1 * (i + 1))
        for i, c in enumerate(centers)
    ]

    result = auction_round(ensemble, agents)

    expected = 0
    for agent in agents:
        t = acceptable_range(classify(agent.kernel, ensemble.stimulus), ensemble.base_value, agent.genome.flexibility_gene)
        keyed = encode_value(80) in agent.genome.hash_genes
        expected += keyed and t.lo <= ensemble.offer_price <= t.hi
    assert result.acceptance_rate == pytest.approx(expected / len(agents))


def test_auction_round_requires_operator_in_population():
    ensemble = link(9, [_prop("A"), _prop("B")], 1.0)

    with pytest.raises(ValueError):
        auction_round(ensemble, [_agent(0), _agent(1)])


def test_feedback_adjust_examples():
    ensemble = link(0, [_prop("A", base_value=40.0), _prop("B", base_value=60.0)], 1.0)

    lowered = feedback_adjust(ensemble, _result(ensemble, 0.0), (0.2, 0.8), 0.1)
    held = feedback_adjust(ensemble, _result(ensemble, 0.5), (0.2, 0.8), 0.1)
    raised = feedback_adjust(ensemble, _result(ensemble, 1.0), (0.2, 0.8), 0.1)

    assert lowered.offer_price == pytest.approx(90.0)
    assert held.offer_price == pytest.approx(100.0)
    assert raised.offer_price == pytest.approx(110.0)
    assert lowered.round == held.round == raised.round == 1


def test_feedback_adjust_keeps_price_positive():
    ensemble = link(0, [_prop("A"), _prop("B")], 1.0)

    for _ in range(500):
        ensemble = feedback_adjust(ensemble, _result(ensemble, 0.0), (0.2, 0.8), 0.3)

    assert ensemble.offer_price > 0.0


def test_feedback_adjust_rejects_stale_result():
    ensemble = link(0, [_prop("A"), _prop("B")], 1.0)
    stale = _result(ensemble, 0.5)
    ensemble = feedback_adjust(ensemble, stale)

    with pytest.raises(ValueError):
        feedback_adjust(ensemble, stale)


def test_feedback_adjust_relinks_after_repeated_rejection():
    props = {p.id: p for p in (_prop("A", base_value=50.0), _prop("B", base_value=30.0), _prop("C", base_value=20.0))}
    ensemble = link(0, list(props.values()), 1.0)
    scores = {"A": 0.9, "B": 0.1, "C": 0.5}

    ensemble = feedback_adjust(ensemble, _result(ensemble, 0.0), (0.2, 0.8), 0.1, 2, scores, props)
    assert ensemble.members == ("A", "B", "C")
    assert ensemble.low_streak == 1

    ensemble = feedback_adjust(ensemble, _result(ensemble, 0.0), (0.2, 0.8), 0.1, 2, scores, props)

    assert ensemble.members == ("A", "C")
    assert ensemble.base_value == pytest.approx(70.0)
    assert ensemble.offer_price == pytest.approx(100.0 * 0.9 * 0.9 * 0.7)
    assert ensemble.low_streak == 0
