"""
Observation Criterion - Minimal Utility of Acquisition.

    c_x = (sum over first-order neighbors n of K_x / K_n) * (Sm / Sc)

K_x is the agent's proposition count, K_n each neighbor's, Sm the
symbolic premium and Sc the scarcity premium. Premiums are sampled from
first-order neighbors only. An agent enters the pairing pool for a
proposition when its kernel-implied utility A_x * base_value reaches c_x.

Usage:
    from src.network.observation import observation_criterion, sample_premiums
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.kernel.geometry import classify
from src.markets.records import Proposition
from src.network.agents import AgentState
from src.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_SCARCITY_FLOOR = 0.05


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class ObservationInputs:
    """Inputs of the observation criterion for one agent and proposition."""
    k_x: int
    k_neighbors: Tuple[int, ...]
    sm: float
    sc: float

    def __post_init__(self) -> None:
        if self.k_x < 0:
            raise ValueError(f"K_x must be non-negative, got {self.k_x}")
        if any(k < 0 for k in self.k_neighbors):
            raise ValueError(f"neighbor counts must be non-negative, got {self.k_neighbors}")
        if not self.sc > 0:
            raise ValueError(f"scarcity premium must be positive, got {self.sc}")
        if not np.isfinite(self.sm):
            raise ValueError(f"symbolic premium must be finite, got {self.sm}")


# =============================================================================
# PUBLIC API
# =============================================================================

def observation_criterion(inputs: ObservationInputs) -> float:
    """
    Evaluate c_x.

    An empty neighborhood makes the network term 1. Neighbor counts of
    zero are floored to 1.
    """
    if not inputs.k_neighbors:
        network_term = 1.0
    else:
        if 0 in inputs.k_neighbors:
            logger.debug(
                f"Flooring {inputs.k_neighbors.count(0)} zero neighbor count(s) to 1"
            )
        network_term = sum(inputs.k_x / max(k_n, 1) for k_n in inputs.k_neighbors)
    return network_term * (inputs.sm / inputs.sc)


def sample_premiums(
    agent: AgentState,
    proposition: Proposition,
    neighbors: Sequence[AgentState],
    scarcity_floor: float = DEFAULT_SCARCITY_FLOOR,
) -> Tuple[float, float]:
    """
    Sample (Sm, Sc) from the agent's first-order neighbors.

    Sm is the fraction of neighbors holding the proposition; Sc is
    max(floor, 1 - copies held by neighbors / neighbor count). An empty
    neighborhood yields (0, 1).
    """
    if not 0.0 < scarcity_floor <= 1.0:
        raise ValueError(f"scarcity floor must lie in (0, 1], got {scarcity_floor}")
    observed = [n for n in neighbors if n.id != agent.id]
    if not observed:
        return 0.0, 1.0

    copies = [n.holdings[proposition.id] for n in observed]
    sm = sum(1 for c in copies if c > 0) / len(observed)
    sc = max(scarcity_floor, 1.0 - sum(copies) / max(1, len(observed)))
    return sm, sc


def observation_inputs(
    agent: AgentState,
    proposition: Proposition,
    neighbors: Sequence[AgentState],
    scarcity_floor: float = DEFAULT_SCARCITY_FLOOR,
) -> ObservationInputs:
    """Collect K_x, neighbor K_n and sampled premiums for one agent."""
    sm, sc = sample_premiums(agent, proposition, neighbors, scarcity_floor)
    return ObservationInputs(
        k_x=agent.proposition_count,
        k_neighbors=tuple(n.proposition_count for n in neighbors if n.id != agent.id),
        sm=sm,
        sc=sc,
    )


def should_acquire(agent: AgentState, proposition: Proposition, c_x: float) -> bool:
    """True iff A_x * base_value >= c_x (closed comparison)."""
    if not np.isfinite(c_x):
        raise ValueError(f"c_x must be finite, got {c_x}")
    utility = classify(agent.kernel, proposition.stimulus) * proposition.base_value
    return utility >= c_x
