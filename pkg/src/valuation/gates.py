"""
Acceptance Gates.

Turns an agent's classification of an item into money:
    - acceptable_range: the agent's acceptable price interval T
    - eq1_gate: the binary acceptance criterion Y_ik (offered price inside T)
    - full_gate: hash gate on the rounded price AND the Y_ik criterion

A rejected gate is still an observation; callers record it as a bid.

Usage:
    from src.valuation.gates import full_gate, acceptable_range
"""

from dataclasses import dataclass
from typing import Protocol, Tuple

from src.genome.representation import Genome
from src.kernel.geometry import Kernel, Stimulus, classify
from src.valuation.cipher import hash_gate, round_price


# =============================================================================
# REASON CODES
# =============================================================================

REASON_ACCEPTED = "accepted"
REASON_HASH_FAIL = "hash_fail"
REASON_OUT_OF_RANGE = "out_of_range"

GATE_REASONS = (REASON_HASH_FAIL, REASON_OUT_OF_RANGE, REASON_ACCEPTED)


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class PriceInterval:
    """Closed interval of acceptable prices, in placeholder units."""
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lo <= self.hi:
            raise ValueError(f"price interval must satisfy 0 <= lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def center(self) -> float:
        return (self.lo + self.hi) / 2.0

    def overlap(self, other: "PriceInterval") -> "PriceInterval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return PriceInterval(lo, hi)


@dataclass(frozen=True)
class GateDecision:
    """Binary acceptance plus the stage that decided it."""
    accepted: int
    reason: str

    def __post_init__(self) -> None:
        if self.reason not in GATE_REASONS:
            raise ValueError(f"unknown gate reason: {self.reason}")
        if bool(self.accepted) != (self.reason == REASON_ACCEPTED):
            raise ValueError("accepted must be 1 exactly when reason is 'accepted'")


class Evaluator(Protocol):
    """Anything holding a genome and a kernel (agents)."""
    genome: Genome
    kernel: Kernel


class Valued(Protocol):
    """Anything with a concept-space position and a base value (items)."""
    stimulus: Stimulus
    base_value: float


ACCEPTED = GateDecision(1, REASON_ACCEPTED)
HASH_FAIL = GateDecision(0, REASON_HASH_FAIL)
OUT_OF_RANGE = GateDecision(0, REASON_OUT_OF_RANGE)


# =============================================================================
# PUBLIC API
# =============================================================================

def acceptable_range(a_x: float, base_value: float, flexibility: float) -> PriceInterval:
    """
    Acceptable price interval around the agent's perceived value.

    center c = base_value * A_x, half-width w = flexibility * c,
    interval [max(0, c - w), c + w]. A_x = 0 yields [0, 0].
    """
    if not 0.0 <= a_x <= 1.0:
        raise ValueError(f"A_x must lie in [0, 1], got {a_x}")
    if base_value <= 0:
        raise ValueError(f"base_value must be positive, got {base_value}")
    if not 0.0 <= flexibility <= 1.0:
        raise ValueError(f"flexibility must lie in [0, 1], got {flexibility}")

    center = base_value * a_x
    half_width = flexibility * center
    return PriceInterval(max(0.0, center - half_width), center + half_width)


def normalized_threshold(t: PriceInterval, x_j: float) -> Tuple[float, float]:
    """Price-normalized band k = T / X_j (defined for X_j > 0)."""
    if x_j <= 0:
        raise ValueError(f"normalized threshold needs a positive price, got {x_j}")
    return t.lo / x_j, t.hi / x_j


def eq1_gate(t: PriceInterval, x_j: float) -> GateDecision:
    """
    Acceptance criterion Y_ik: 1 iff T.lo <= X_j <= T.hi (closed).

    Equivalent, for X_j > 0, to k.lo <= 1 <= k.hi with k = T / X_j.

    Raises:
        ValueError: If X_j is negative.
    """
    if x_j < 0:
        raise ValueError(f"offered price must be non-negative, got {x_j}")
    if t.lo <= x_j <= t.hi:
        return ACCEPTED
    return OUT_OF_RANGE


def perceived_interval(agent: Evaluator, item: Valued) -> PriceInterval:
    """The agent's acceptable range for an item, from its current kernel."""
    a_x = classify(agent.kernel, item.stimulus)
    return acceptable_range(a_x, item.base_value, agent.genome.flexibility_gene)


def full_gate(agent: Evaluator, item: Valued, x_j: float) -> GateDecision:
    """
    Two-stage gate: hash key on round(X_j), then the Y_ik range check.

    The reason names the first failing stage.
    """
    if not hash_gate(agent.genome, round_price(x_j)):
        return HASH_FAIL
    return eq1_gate(perceived_interval(agent, item), x_j)
