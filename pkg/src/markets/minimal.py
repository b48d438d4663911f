"""
Minimal Market - Pairwise Exchange Engine.

Pairwise exchanges of single propositions between agents, for
placeholder units. A seller offers at its perceived value; the buyer
either runs the full gate or, when imitating, replicates an observed
decision. Accepted trades settle at the midpoint of the two agents'
interval overlap (else at the ask), move the proposition, and transfer
money, minting the buyer's shortfall only when minting is enabled.

Constraints:
    - Every evaluation returns a TransactionRecord (no silent drops)
    - Settlement mutates only the two parties

Usage:
    from src.markets.minimal import propose_trade, settle_pairwise, net_gain
"""

from typing import Optional

from src.markets.records import (
    KIND_BID,
    KIND_COMPLETE,
    MARKET_MINIMAL,
    REASON_IMITATION,
    REASON_INSUFFICIENT_FUNDS,
    ImitationSignal,
    Offer,
    Proposition,
    TransactionRecord,
)
from src.network.agents import AgentState
from src.valuation.gates import REASON_ACCEPTED, full_gate, perceived_interval


# =============================================================================
# GAIN AND PAYMENT ACCOUNTING
# =============================================================================

def net_gain(perceived_value: float, price: float) -> float:
    """
    Net gain in percent: 100 * (perceived_value - price) / price.

    The second argument is the reference. Buyers call
    net_gain(own_value, price_paid); sellers call
    net_gain(price_received, own_value). A zero reference yields 0.
    """
    if price == 0:
        return 0.0
    return 100.0 * (perceived_value - price) / price


# =============================================================================
# PUBLIC API
# =============================================================================

def transfer_payment(
    buyer: AgentState, seller: AgentState, price: float, allow_mint: bool
) -> Optional[float]:
    """
    Move price from buyer to seller.

    Returns:
        The minted shortfall (0.0 when the buyer could pay), or None when
        the buyer cannot pay and minting is disabled (nothing moves).
    """
    minted = 0.0
    if buyer.balance < price:
        if not allow_mint:
            return None
        minted = price - buyer.balance
        buyer.balance += minted
    buyer.balance -= price
    seller.balance += price
    return minted


def propose_trade(seller: AgentState, proposition: Proposition) -> Offer:
    """
    Seller offers a held proposition at its perceived value.

    Raises:
        ValueError: If the seller does not hold the proposition.
    """
    if seller.holdings[proposition.id] < 1:
        raise ValueError(
            f"agent {seller.id} does not hold proposition {proposition.id}"
        )
    ask = perceived_interval(seller, proposition).center
    return Offer(seller_id=seller.id, proposition_id=proposition.id, ask=ask)


def settle_pairwise(
    buyer: AgentState,
    seller: AgentState,
    offer: Offer,
    allow_mint: bool,
    *,
    proposition: Proposition,
    tick: int,
    imitation: Optional[ImitationSignal] = None,
) -> TransactionRecord:
    """
    Evaluate and, when accepted, settle one pairwise offer.

    Args:
        buyer: Evaluating agent.
        seller: Offering agent (must hold the proposition).
        offer: Seller's offer.
        allow_mint: Whether the buyer may print its shortfall.
        proposition: The offered proposition.
        tick: Current tick.
        imitation: Observed decision replicated instead of the gate.

    Returns:
        TransactionRecord of kind "complete" or "bid".
    """
    if offer.seller_id != seller.id or offer.proposition_id != proposition.id:
        raise ValueError("offer does not match seller and proposition")
    if seller.holdings[proposition.id] < 1:
        raise ValueError(
            f"agent {seller.id} does not hold proposition {proposition.id}"
        )

    buyer_interval = perceived_interval(buyer, proposition)
    seller_interval = perceived_interval(seller, proposition)
    seller_value = seller_interval.center

    def _record(kind: str, price: float, buyer_value: float, minted: float, reason: str) -> TransactionRecord:
        return TransactionRecord(
            tick=tick,
            market=MARKET_MINIMAL,
            buyer_id=buyer.id,
            seller_id=seller.id,
            object_ref=proposition.id,
            kind=kind,
            price=price,
            gain_buyer_pct=net_gain(buyer_value, price),
            gain_seller_pct=net_gain(price, seller_value),
            minted=minted,
            imitation=imitation is not None,
            reason=reason,
        )

    # -------------------------------------------------------------------------
    # 1. Decision: imitation override or full gate
    # -------------------------------------------------------------------------
    if imitation is not None:
        price = imitation.price
        buyer_value = imitation.perceived_value
        reason = REASON_IMITATION
    else:
        decision = full_gate(buyer, proposition, offer.ask)
        if not decision.accepted:
            return _record(KIND_BID, offer.ask, buyer_interval.center, 0.0, decision.reason)

        overlap = buyer_interval.overlap(seller_interval)
        price = overlap.center if overlap is not None else offer.ask
        buyer_value = buyer_interval.center
        reason = REASON_ACCEPTED

    # -------------------------------------------------------------------------
    # 2. Funds (mint the shortfall only when allowed)
    # -------------------------------------------------------------------------
    minted = transfer_payment(buyer, seller, price, allow_mint)
    if minted is None:
        return _record(KIND_BID, price, buyer_value, 0.0, REASON_INSUFFICIENT_FUNDS)

    # -------------------------------------------------------------------------
    # 3. Ownership
    # -------------------------------------------------------------------------
    seller.give(proposition.id)
    buyer.receive(proposition.id)

    return _record(KIND_COMPLETE, price, buyer_value, minted, reason)
