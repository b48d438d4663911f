"""
Market Record Types.

Tradeable objects and the rows every market evaluation produces.
Every evaluation, accepted or not, becomes a TransactionRecord:
kind "complete" for an exchange that settled, kind "bid" otherwise.

Constraints:
    - Constants and plain value types only
    - No market logic
"""

from dataclasses import dataclass
from typing import Final

from src.kernel.geometry import Stimulus


# =============================================================================
# VOCABULARY
# =============================================================================

MARKET_MINIMAL: Final[str] = "minimal"
MARKET_COMPOSITIONAL: Final[str] = "compositional"

KIND_BID: Final[str] = "bid"
KIND_COMPLETE: Final[str] = "complete"

PROPOSITION_SINGLETON: Final[str] = "singleton"
PROPOSITION_LINKED: Final[str] = "linked"

REASON_INSUFFICIENT_FUNDS: Final[str] = "insufficient_funds"
REASON_IMITATION: Final[str] = "imitation"


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class Proposition:
    """A tradeable object with a position in concept space."""
    id: str
    stimulus: Stimulus
    base_value: float
    kind: str = PROPOSITION_SINGLETON

    def __post_init__(self) -> None:
        if not self.base_value > 0 or self.base_value == float("inf"):
            raise ValueError(f"base_value must be finite and positive, got {self.base_value}")
        if self.kind not in (PROPOSITION_SINGLETON, PROPOSITION_LINKED):
            raise ValueError(f"unknown proposition kind: {self.kind}")


@dataclass(frozen=True)
class Offer:
    """A seller's ask for one proposition."""
    seller_id: int
    proposition_id: str
    ask: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.ask < float("inf"):
            raise ValueError(f"ask must be finite and non-negative, got {self.ask}")


@dataclass(frozen=True)
class ImitationSignal:
    """
    What an imitator copies from an observed completed record.

    Attributes:
        source_id: Agent whose completed purchase was observed.
        price: Observed settled price (paid by the imitator).
        perceived_value: Source's perceived value, adopted by the imitator.
    """
    source_id: int
    price: float
    perceived_value: float


@dataclass(frozen=True)
class TransactionRecord:
    """One bid or completed exchange."""
    tick: int
    market: str
    buyer_id: int
    seller_id: int
    object_ref: str
    kind: str
    price: float
    gain_buyer_pct: float
    gain_seller_pct: float
    minted: float
    imitation: bool
    reason: str

    @property
    def buyer_perceived_value(self) -> float:
        """Buyer's perceived value, recovered from price and buyer gain."""
        return self.price * (1.0 + self.gain_buyer_pct / 100.0)


@dataclass(frozen=True)
class RoundSummary:
    """One compositional auction round, as appended to the round log."""
    tick: int
    ensemble_id: str
    round: int
    offer_price: float
    acceptance_rate: float
    n_fills: int
