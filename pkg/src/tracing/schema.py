"""
Trace Schema.

Column orders and dtypes of every file in a run bundle, the trace
header, and conversions between record objects and DataFrames.

Trace file layout:
    # format: cultural-market-trace
    # spec_version: 1.0.0
    # seed: <int>
    # config_hash: <sha256 of the canonical config JSON>
    # config: <canonical config JSON>
    [# origin: <scenario name>]        scripted traces only
    tick,market,buyer,seller,object,kind,price,gain_buyer_pct,gain_seller_pct,minted,imitation,reason
    ...

Constraints:
    - imitation is written as "true" / "false"
    - Column orders are fixed; readers reject missing columns
    - genomes.csv and kernels.csv hold one row per agent per snapshot
      tick, with one column per dimension (and per anchor coordinate)
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from src.markets.records import RoundSummary, TransactionRecord
from src.utils.constants import TRACE_FORMAT, TRACE_SPEC_VERSION


# =============================================================================
# COLUMN DEFINITIONS
# =============================================================================

TRACE_COLUMNS: List[str] = [
    "tick",
    "market",
    "buyer",
    "seller",
    "object",
    "kind",
    "price",
    "gain_buyer_pct",
    "gain_seller_pct",
    "minted",
    "imitation",
    "reason",
]

TRACE_DTYPES: Dict[str, str] = {
    "tick": "int64",
    "market": "str",
    "buyer": "int64",
    "seller": "int64",
    "object": "str",
    "kind": "str",
    "price": "float64",
    "gain_buyer_pct": "float64",
    "gain_seller_pct": "float64",
    "minted": "float64",
    "imitation": "str",
    "reason": "str",
}

ROUND_COLUMNS: List[str] = ["tick", "ensemble_id", "round", "offer_price", "acceptance_rate", "n_fills"]
ROUND_DTYPES: Dict[str, str] = {
    "tick": "int64",
    "ensemble_id": "str",
    "round": "int64",
    "offer_price": "float64",
    "acceptance_rate": "float64",
    "n_fills": "int64",
}

GENOME_KEY_COLUMNS: List[str] = ["tick", "agent_id", "flexibility", "hash_genes"]
KERNEL_KEY_COLUMNS: List[str] = ["tick", "agent_id"]
KERNEL_FIELDS: Tuple[str, ...] = ("alpha", "lo", "hi")
EDGE_COLUMNS: List[str] = ["tick", "kind", "id_a", "id_b"]
POSITION_COLUMNS: List[str] = ["tick", "id", "x", "y"]
FUNDAMENTAL_COLUMNS: List[str] = ["tick", "object", "fundamental_value"]

SNAPSHOT_NAMES: Tuple[str, ...] = ("genomes", "kernels", "edges", "positions", "fundamentals")

FIXED_SNAPSHOT_COLUMNS: Dict[str, List[str]] = {
    "edges": EDGE_COLUMNS,
    "positions": POSITION_COLUMNS,
    "fundamentals": FUNDAMENTAL_COLUMNS,
}

FIXED_SNAPSHOT_DTYPES: Dict[str, Dict[str, str]] = {
    "edges": {"tick": "int64", "kind": "str", "id_a": "int64", "id_b": "int64"},
    "positions": {"tick": "int64", "id": "int64", "x": "float64", "y": "float64"},
    "fundamentals": {"tick": "int64", "object": "str", "fundamental_value": "float64"},
}

_KEY_DTYPES: Dict[str, str] = {"tick": "int64", "agent_id": "int64", "flexibility": "float64", "hash_genes": "str"}

TRUE_TEXT = "true"
FALSE_TEXT = "false"


# =============================================================================
# SNAPSHOT LAYOUT
# =============================================================================

def genome_columns(n_dims: int, n_anchors: int) -> List[str]:
    """One row per agent: keys, then extent_<d>, then anchor_<m>_<d>."""
    extents = [f"extent_{d}" for d in range(n_dims)]
    anchors = [f"anchor_{m}_{d}" for m in range(n_anchors) for d in range(n_dims)]
    return GENOME_KEY_COLUMNS + extents + anchors


def kernel_columns(n_dims: int) -> List[str]:
    """One row per agent: keys, then alpha_<d>, lo_<d>, hi_<d>."""
    return KERNEL_KEY_COLUMNS + [f"{name}_{d}" for name in KERNEL_FIELDS for d in range(n_dims)]


def snapshot_layout(n_dims: int, n_anchors: int) -> Dict[str, List[str]]:
    """Column order of every snapshot table for a population shape."""
    return {
        "genomes": genome_columns(n_dims, n_anchors),
        "kernels": kernel_columns(n_dims),
        **FIXED_SNAPSHOT_COLUMNS,
    }


def config_layout(config: Mapping[str, Any]) -> Dict[str, List[str]]:
    """
    Snapshot layout implied by a plain config's genome section.

    Raises:
        ValueError: If the config has no usable genome section.
    """
    try:
        genome = config["genome"]
        return snapshot_layout(int(genome["n_dims"]), int(genome["n_anchors"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"config has no usable genome section: {exc!r}") from exc


def layout_from_columns(name: str, columns: Sequence[str]) -> List[str]:
    """
    Expected column order for a snapshot file given its header row.

    Raises:
        ValueError: If the per-dimension columns do not form a full layout.
    """
    if name in FIXED_SNAPSHOT_COLUMNS:
        return FIXED_SNAPSHOT_COLUMNS[name]
    if name == "kernels":
        n_dims = sum(1 for c in columns if c.startswith("alpha_"))
        expected = kernel_columns(n_dims)
    else:
        n_dims = sum(1 for c in columns if c.startswith("extent_"))
        n_anchor_genes = sum(1 for c in columns if c.startswith("anchor_"))
        if n_dims == 0 or n_anchor_genes % n_dims:
            raise ValueError(f"{name}: {n_anchor_genes} anchor columns do not fit {n_dims} dimensions")
        expected = genome_columns(n_dims, n_anchor_genes // n_dims)
    if n_dims == 0 or list(columns) != expected:
        raise ValueError(f"{name}: columns {list(columns)} do not follow the snapshot layout")
    return expected


def snapshot_dtypes(name: str, columns: Sequence[str]) -> Dict[str, str]:
    if name in FIXED_SNAPSHOT_DTYPES:
        return FIXED_SNAPSHOT_DTYPES[name]
    return {c: _KEY_DTYPES.get(c, "float64") for c in columns}


def blank_columns(name: str, columns: Sequence[str]) -> List[str]:
    """Columns that may be left blank (anchors beyond an agent's own count)."""
    if name != "genomes":
        return []
    return [c for c in columns if c.startswith("anchor_")]


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class TraceHeader:
    """Metadata lines at the top of a trace file."""
    seed: int
    config_hash: str
    config: Mapping[str, Any]
    format: str = TRACE_FORMAT
    spec_version: str = TRACE_SPEC_VERSION
    origin: Optional[str] = None


@dataclass
class Trace:
    """
    A loaded run bundle.

    Attributes:
        header: Trace header.
        records: Transaction records (TRACE_COLUMNS, imitation as bool).
        rounds: Compositional round summaries (may be empty).
        snapshots: Snapshot tables by name (missing files are empty frames).
    """
    header: TraceHeader
    records: pd.DataFrame
    rounds: pd.DataFrame = field(default_factory=lambda: empty_frame(ROUND_COLUMNS, ROUND_DTYPES))
    snapshots: Dict[str, pd.DataFrame] = field(default_factory=dict)

    def snapshot(self, name: str) -> pd.DataFrame:
        if name in self.snapshots:
            return self.snapshots[name]
        columns = config_layout(self.header.config)[name]
        return empty_frame(columns, snapshot_dtypes(name, columns))


# =============================================================================
# CONVERSIONS
# =============================================================================

def empty_frame(columns: Sequence[str], dtypes: Mapping[str, str]) -> pd.DataFrame:
    return pd.DataFrame({c: pd.Series(dtype=dtypes.get(c, "object")) for c in columns})


def records_to_frame(records: Iterable[TransactionRecord]) -> pd.DataFrame:
    """Records as a trace DataFrame (imitation kept as bool)."""
    rows = [
        {
            "tick": r.tick,
            "market": r.market,
            "buyer": r.buyer_id,
            "seller": r.seller_id,
            "object": r.object_ref,
            "kind": r.kind,
            "price": float(r.price),
            "gain_buyer_pct": float(r.gain_buyer_pct),
            "gain_seller_pct": float(r.gain_seller_pct),
            "minted": float(r.minted),
            "imitation": bool(r.imitation),
            "reason": r.reason,
        }
        for r in records
    ]
    if not rows:
        frame = empty_frame(TRACE_COLUMNS, TRACE_DTYPES)
        frame["imitation"] = frame["imitation"].astype(bool)
        return frame
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def frame_to_records(df: pd.DataFrame) -> List[TransactionRecord]:
    return [
        TransactionRecord(
            tick=int(row.tick),
            market=str(row.market),
            buyer_id=int(row.buyer),
            seller_id=int(row.seller),
            object_ref=str(row.object),
            kind=str(row.kind),
            price=float(row.price),
            gain_buyer_pct=float(row.gain_buyer_pct),
            gain_seller_pct=float(row.gain_seller_pct),
            minted=float(row.minted),
            imitation=bool(row.imitation),
            reason=str(row.reason),
        )
        for row in df.itertuples(index=False)
    ]


def rounds_to_frame(rounds: Iterable[RoundSummary]) -> pd.DataFrame:
    rows = [asdict(r) for r in rounds]
    if not rows:
        return empty_frame(ROUND_COLUMNS, ROUND_DTYPES)
    return pd.DataFrame(rows, columns=ROUND_COLUMNS)


def imitation_to_text(series: pd.Series) -> pd.Series:
    return series.map(lambda flag: TRUE_TEXT if flag else FALSE_TEXT)


def imitation_from_text(series: pd.Series) -> pd.Series:
    unknown = set(series.unique()) - {TRUE_TEXT, FALSE_TEXT}
    if unknown:
        raise ValueError(f"imitation column holds unexpected values: {sorted(unknown)}")
    return series == TRUE_TEXT
