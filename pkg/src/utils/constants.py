"""
Global System Constants.

Defines non-domain, cross-cutting constants used across the simulator:
file names, exit codes and format identifiers. Model defaults live in
src/config/settings.py; model tolerances live next to the operation
that uses them.
"""

from typing import Final


# =============================================================================
# TRACE FORMAT
# =============================================================================

TRACE_FORMAT: Final[str] = "cultural-market-trace"
TRACE_SPEC_VERSION: Final[str] = "1.0.0"
HEADER_PREFIX: Final[str] = "# "


# =============================================================================
# OUTPUT BUNDLE FILE NAMES
# =============================================================================

TRACE_FILE: Final[str] = "trace.csv"
ROUNDS_FILE: Final[str] = "rounds.csv"
GENOMES_FILE: Final[str] = "genomes.csv"
KERNELS_FILE: Final[str] = "kernels.csv"
EDGES_FILE: Final[str] = "edges.csv"
POSITIONS_FILE: Final[str] = "positions.csv"
FUNDAMENTALS_FILE: Final[str] = "fundamentals.csv"
REPORTS_TEXT_FILE: Final[str] = "reports.txt"
REPORTS_JSON_FILE: Final[str] = "reports.jsonl"


# =============================================================================
# EXIT CODES
# =============================================================================

EXIT_OK: Final[int] = 0
EXIT_USAGE: Final[int] = 1
EXIT_CONFIG: Final[int] = 2
EXIT_FLAGGED: Final[int] = 3
EXIT_IO: Final[int] = 4
EXIT_CONFIG_SYNTAX: Final[int] = 5
EXIT_REPLAY_MISMATCH: Final[int] = 6


# =============================================================================
# ALPHABET
# =============================================================================

ALPHABET: Final[str] = "abcdefghijklmnopqrstuvwxyz"
"""Letters of the endogenous string and of the value cipher (a=0 ... z=25)."""
