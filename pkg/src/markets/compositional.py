"""
Compositional Market - One-to-All Auctions over Linked Propositions.

An operator links propositions into an ensemble and offers it to the
whole population at a single price. Every agent runs the full gate on
that price; accepting agents who can pay receive one non-transferable
share of the ensemble and pay the operator. The acceptance rate drives
a multiplicative feedback on the offer price, and optionally a relink
that drops the least-valued member after repeated rejection.

Constraints:
    - Every agent is evaluated exactly once per round, in agent-id order
    - Offer prices stay positive under any sequence of adjustments
    - Ensemble supply is unbounded

Usage:
    from src.markets.compositional import link, auction_round, feedback_adjust
"""

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.kernel.geometry import Stimulus
from src.markets.minimal import net_gain, transfer_payment
from src.markets.records import (
    KIND_BID,
    KIND_COMPLETE,
    MARKET_COMPOSITIONAL,
    REASON_INSUFFICIENT_FUNDS,
    Proposition,
    RoundSummary,
    TransactionRecord,
)
from src.network.agents import AgentState
from src.valuation.gates import GateDecision, full_gate, perceived_interval

DEFAULT_BAND: Tuple[float, float] = (0.2, 0.8)
DEFAULT_DELTA = 0.05
DEFAULT_RELINK_AFTER = 3


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class Ensemble:
    """
    Operator-linked propositions offered at one price.

    Attributes:
        id: Ensemble identifier (trace object_ref).
        operator_id: Agent that receives fill payments.
        members: Ordered, duplicate-free member proposition ids.
        offer_price: Current offer price X_j.
        linkage_factor: Multiplier applied to the members' base values.
        round: Completed feedback rounds.
        stimulus: Centroid of member stimuli.
        base_value: Sum of member base values.
        low_streak: Consecutive rounds below the acceptance band.
    """
    id: str
    operator_id: int
    members: Tuple[str, ...]
    offer_price: float
    linkage_factor: float
    round: int
    stimulus: Stimulus
    base_value: float
    low_streak: int = 0

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise ValueError(f"ensemble needs at least 2 members, got {len(self.members)}")
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"ensemble members must be distinct, got {self.members}")
        if not 0.0 <= self.offer_price < float("inf"):
            raise ValueError(f"offer_price must be finite and non-negative, got {self.offer_price}")
        if not self.linkage_factor > 0:
            raise ValueError(f"linkage_factor must be positive, got {self.linkage_factor}")
        if self.round < 0:
            raise ValueError(f"round must be non-negative, got {self.round}")


@dataclass(frozen=True)
class AuctionRoundResult:
    """Outcome of one one-to-all round."""
    ensemble_id: str
    round: int
    decisions: Dict[int, GateDecision]
    acceptance_rate: float
    fills: Tuple[int, ...]
    records: Tuple[TransactionRecord, ...] = ()

    def summary(self, tick: int, offer_price: float) -> RoundSummary:
        return RoundSummary(
            tick=tick,
            ensemble_id=self.ensemble_id,
            round=self.round,
            offer_price=offer_price,
            acceptance_rate=self.acceptance_rate,
            n_fills=len(self.fills),
        )


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _centroid(propositions: Sequence[Proposition]) -> Stimulus:
    dims = {p.stimulus.n_dims for p in propositions}
    if len(dims) != 1:
        raise ValueError("linked propositions must share one dimensionality")
    return Stimulus.of(np.asarray([p.stimulus.coords for p in propositions]).mean(axis=0))


def _relink(
    ensemble: Ensemble,
    member_scores: Mapping[str, float],
    catalog: Mapping[str, Proposition],
) -> Ensemble:
    """Drop the member with the lowest population-mean A_x."""
    dropped = min(ensemble.members, key=lambda m: member_scores[m])
    kept = tuple(m for m in ensemble.members if m != dropped)
    kept_props = [catalog[m] for m in kept]
    base_value = sum(p.base_value for p in kept_props)
    return replace(
        ensemble,
        members=kept,
        stimulus=_centroid(kept_props),
        base_value=base_value,
        offer_price=ensemble.offer_price * base_value / ensemble.base_value,
        low_streak=0,
    )


# =============================================================================
# PUBLIC API
# =============================================================================

def link(
    operator_id: int,
    propositions: Sequence[Proposition],
    linkage_factor: float,
    ensemble_id: Optional[str] = None,
) -> Ensemble:
    """
    Link propositions into an ensemble priced at linkage * sum(base values).

    Raises:
        ValueError: With fewer than two members or duplicate members.
    """
    ids = [p.id for p in propositions]
    if len(ids) < 2:
        raise ValueError(f"an ensemble links at least 2 propositions, got {len(ids)}")
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate ensemble members: {ids}")
    if not linkage_factor > 0:
        raise ValueError(f"linkage_factor must be positive, got {linkage_factor}")

    base_value = sum(p.base_value for p in propositions)
    return Ensemble(
        id=ensemble_id or "+".join(ids),
        operator_id=operator_id,
        members=tuple(ids),
        offer_price=linkage_factor * base_value,
        linkage_factor=linkage_factor,
        round=0,
        stimulus=_centroid(propositions),
        base_value=base_value,
    )


def auction_round(
    ensemble: Ensemble,
    agents: Sequence[AgentState],
    tick: int = 0,
    allow_mint: bool = False,
) -> AuctionRoundResult:
    """
    Offer the ensemble to every agent at its current price.

    The operator must be among the agents and is evaluated like anyone
    else. acceptance_rate counts gate acceptances; a fill additionally
    requires the buyer to pay (or mint).

    Returns:
        AuctionRoundResult with one record per agent.
    """
    ordered = sorted(agents, key=lambda a: a.id)
    operator = next((a for a in ordered if a.id == ensemble.operator_id), None)
    if operator is None:
        raise ValueError(f"operator {ensemble.operator_id} is not in the population")

    price = ensemble.offer_price
    operator_value = perceived_interval(operator, ensemble).center
    decisions: Dict[int, GateDecision] = {}
    fills: List[int] = []
    records: List[TransactionRecord] = []

    for agent in ordered:
        decision = full_gate(agent, ensemble, price)
        decisions[agent.id] = decision

        kind, reason, minted = KIND_BID, decision.reason, 0.0
        if decision.accepted:
            paid = transfer_payment(agent, operator, price, allow_mint)
            if paid is None:
                reason = REASON_INSUFFICIENT_FUNDS
            else:
                kind, minted = KIND_COMPLETE, paid
                agent.ensemble_shares[ensemble.id] += 1
                fills.append(agent.id)

        records.append(
            TransactionRecord(
                tick=tick,
                market=MARKET_COMPOSITIONAL,
                buyer_id=agent.id,
                seller_id=operator.id,
                object_ref=ensemble.id,
                kind=kind,
                price=price,
                gain_buyer_pct=net_gain(perceived_interval(agent, ensemble).center, price),
                gain_seller_pct=net_gain(price, operator_value),
                minted=minted,
                imitation=False,
                reason=reason,
            )
        )

    accepted = sum(1 for d in decisions.values() if d.accepted)
    rate = accepted / len(decisions) if decisions else 0.0
    return AuctionRoundResult(
        ensemble_id=ensemble.id,
        round=ensemble.round,
        decisions=decisions,
        acceptance_rate=rate,
        fills=tuple(fills),
        records=tuple(records),
    )


def feedback_adjust(
    ensemble: Ensemble,
    result: AuctionRoundResult,
    band: Tuple[float, float] = DEFAULT_BAND,
    delta: float = DEFAULT_DELTA,
    relink_after: Optional[int] = None,
    member_scores: Optional[Mapping[str, float]] = None,
    catalog: Optional[Mapping[str, Proposition]] = None,
) -> Ensemble:
    """
    Reprice after a round.

    Below the band the price was too high (x (1 - delta)); above it, too
    low (x (1 + delta)); inside it the price holds. The round counter
    always increments. With relink_after, member_scores and catalog
    given, an ensemble of 3+ members that has sat below the band for
    relink_after consecutive rounds drops its lowest-scoring member and
    scales its price by the retained share of base value.

    Raises:
        ValueError: If the result belongs to another ensemble or round.
    """
    if result.ensemble_id != ensemble.id or result.round != ensemble.round:
        raise ValueError(
            f"result ({result.ensemble_id}, round {result.round}) does not match "
            f"ensemble ({ensemble.id}, round {ensemble.round})"
        )
    lo, hi = band
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError(f"band must satisfy 0 <= lo <= hi <= 1, got {band}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")

    price = ensemble.offer_price
    low_streak = 0
    if result.acceptance_rate < lo:
        price *= 1.0 - delta
        low_streak = ensemble.low_streak + 1
    elif result.acceptance_rate > hi:
        price *= 1.0 + delta

    adjusted = replace(ensemble, offer_price=price, round=ensemble.round + 1, low_streak=low_streak)

    if (
        relink_after is not None
        and member_scores is not None
        and catalog is not None
        and low_streak >= relink_after
        and len(adjusted.members) > 2
    ):
        adjusted = _relink(adjusted, member_scores, catalog)
    return adjusted
