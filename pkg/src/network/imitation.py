"""
Imitation Override.

When an object is poorly known to an agent (A_x below the familiarity
threshold), the agent skips classification: it copies a neighbor's
endogenous string and replicates the neighbor's observed purchase at the
observed price. The kernel is not modified.
"""

from typing import Iterable, Optional, Set, Tuple

from src.genome.mutation import copy_hash_segment
from src.kernel.geometry import classify
from src.markets.records import (
    KIND_COMPLETE,
    MARKET_MINIMAL,
    ImitationSignal,
    Proposition,
    TransactionRecord,
)
from src.network.agents import AgentState

DEFAULT_FAMILIARITY_THRESHOLD = 0.3


def find_imitation_source(
    records: Iterable[TransactionRecord],
    proposition_id: str,
    neighbor_ids: Set[int],
) -> Optional[TransactionRecord]:
    """Most recent completed minimal purchase of the proposition by a neighbor."""
    source = None
    for record in records:
        if (
            record.kind == KIND_COMPLETE
            and record.market == MARKET_MINIMAL
            and record.object_ref == proposition_id
            and record.buyer_id in neighbor_ids
            and record.price > 0
        ):
            source = record
    return source


def imitate(
    agent: AgentState,
    counterpart: AgentState,
    proposition: Proposition,
    observed: TransactionRecord,
    familiarity_threshold: float = DEFAULT_FAMILIARITY_THRESHOLD,
) -> Tuple[AgentState, Optional[ImitationSignal]]:
    """
    Apply the imitation override for one observed purchase.

    Args:
        agent: Would-be imitator (updated in place when imitation fires).
        counterpart: Neighbor whose purchase was observed.
        proposition: The object being evaluated.
        observed: The counterpart's completed record for that object.
        familiarity_threshold: A_x below which the agent imitates.

    Returns:
        (agent, signal) where signal is None when the agent classifies
        normally.

    Raises:
        ValueError: If the record is not a completed purchase of the
            proposition by the counterpart.
    """
    if not 0.0 <= familiarity_threshold <= 1.0:
        raise ValueError(
            f"familiarity threshold must lie in [0, 1], got {familiarity_threshold}"
        )
    if (
        observed.kind != KIND_COMPLETE
        or observed.buyer_id != counterpart.id
        or observed.object_ref != proposition.id
    ):
        raise ValueError("observed record must be the counterpart's completed purchase")

    if classify(agent.kernel, proposition.stimulus) >= familiarity_threshold:
        return agent, None
    if observed.price <= 0:
        return agent, None

    agent.genome = copy_hash_segment(counterpart.genome, agent.genome)
    signal = ImitationSignal(
        source_id=counterpart.id,
        price=observed.price,
        perceived_value=observed.buyer_perceived_value,
    )
    return agent, signal
