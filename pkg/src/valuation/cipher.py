"""
Value Cipher and Hash Gate.

Encodes a non-negative integer value as a base-26 a-z string
(a=0 ... z=25, most significant letter first) and tests whether the
encoding occurs, in order and contiguously, inside an agent's endogenous
string. A match is the key that admits the value.

Constraints:
    - Toy cipher only; no security or collision-resistance properties
    - Pure functions, no logging
"""

import math

from src.genome.representation import Genome
from src.utils.constants import ALPHABET

_BASE = len(ALPHABET)


def encode_value(v: int) -> str:
    """
    Base-26 positional encoding of a non-negative integer.

    Examples:
        0 -> "a", 25 -> "z", 26 -> "ba"

    Raises:
        ValueError: If v is negative.
    """
    if v < 0:
        raise ValueError(f"value must be non-negative, got {v}")

    v = int(v)
    if v == 0:
        return ALPHABET[0]

    digits = []
    while v:
        v, remainder = divmod(v, _BASE)
        digits.append(ALPHABET[remainder])
    return "".join(reversed(digits))


def round_price(price: float) -> int:
    """Round a non-negative price to the nearest integer (halves round up)."""
    if price < 0:
        raise ValueError(f"price must be non-negative, got {price}")
    return int(math.floor(price + 0.5))


def hash_gate(g: Genome, v: int) -> bool:
    """True iff encode_value(v) is a contiguous substring of the hash genes."""
    return encode_value(v) in g.hash_genes
