"""
Transaction Arcs, Common-Scaling Arcs and Mobility.

Black arcs join agents that completed a transaction this tick; red arcs
join agents whose kernels share a common scaling factor (alpha distance
within tolerance), regardless of field position.

Usage:
    from src.network.arcs import update_edges, move_agent, neighbor_graph
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Sequence, Tuple

import networkx as nx
import numpy as np

from src.markets.records import KIND_COMPLETE, TransactionRecord
from src.network.agents import AgentState

Pair = Tuple[int, int]

ARC_BLACK = "black"
ARC_RED = "red"

TOPOLOGY_ARCS = "arcs"
TOPOLOGY_COMPLETE = "complete"
TOPOLOGIES = (TOPOLOGY_ARCS, TOPOLOGY_COMPLETE)


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass(frozen=True)
class ArcSet:
    """Unordered agent pairs (a < b), by arc kind."""
    black: FrozenSet[Pair] = frozenset()
    red: FrozenSet[Pair] = frozenset()

    def __post_init__(self) -> None:
        for a, b in self.black | self.red:
            if a >= b:
                raise ValueError(f"arc pairs must be ordered and loop-free, got ({a}, {b})")

    def rows(self) -> Iterable[Tuple[str, int, int]]:
        """(kind, id_a, id_b) rows, black first, each kind sorted."""
        for a, b in sorted(self.black):
            yield ARC_BLACK, a, b
        for a, b in sorted(self.red):
            yield ARC_RED, a, b


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


def _alpha_matrix(population: Sequence[AgentState]) -> np.ndarray:
    return np.asarray([agent.kernel.alpha for agent in population], dtype=float)


# =============================================================================
# PUBLIC API
# =============================================================================

def red_arcs(population: Sequence[AgentState], alpha_tol: float) -> FrozenSet[Pair]:
    """All pairs whose kernels' alpha distance is <= alpha_tol."""
    if alpha_tol < 0:
        raise ValueError(f"alpha_tol must be non-negative, got {alpha_tol}")
    if len(population) < 2:
        return frozenset()

    alphas = _alpha_matrix(population)
    distance = np.abs(alphas[:, None, :] - alphas[None, :, :]).max(axis=2)
    rows, cols = np.nonzero(np.triu(distance <= alpha_tol, k=1))
    ids = [agent.id for agent in population]
    return frozenset(_pair(ids[i], ids[j]) for i, j in zip(rows.tolist(), cols.tolist()))


def update_edges(
    population: Sequence[AgentState],
    this_tick_records: Sequence[TransactionRecord],
    alpha_tol: float,
) -> ArcSet:
    """
    Rebuild the arc set after a tick's settlements.

    Raises:
        ValueError: If the records span more than one tick.
    """
    ticks = {record.tick for record in this_tick_records}
    if len(ticks) > 1:
        raise ValueError(f"update_edges expects records from one tick, got ticks {sorted(ticks)}")

    black = frozenset(
        _pair(record.buyer_id, record.seller_id)
        for record in this_tick_records
        if record.kind == KIND_COMPLETE and record.buyer_id != record.seller_id
    )
    return ArcSet(black=black, red=red_arcs(population, alpha_tol))


def neighbor_graph(
    agent_ids: Sequence[int], arcs: ArcSet, topology: str = TOPOLOGY_ARCS
) -> nx.Graph:
    """Observation graph: red and black arcs, or the complete graph."""
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology: {topology}")
    if topology == TOPOLOGY_COMPLETE:
        return nx.complete_graph(sorted(agent_ids))

    graph = nx.Graph()
    graph.add_nodes_from(sorted(agent_ids))
    for kind, a, b in arcs.rows():
        if graph.has_edge(a, b):
            graph[a][b]["kinds"] = graph[a][b]["kinds"] + (kind,)
        else:
            graph.add_edge(a, b, kinds=(kind,))
    return graph


def move_agent(
    agent: AgentState, counterpart: AgentState, step: float
) -> Tuple[float, float]:
    """Position after moving a fraction `step` of the way to the counterpart."""
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step must lie in (0, 1], got {step}")
    here = np.asarray(agent.position, dtype=float)
    there = np.asarray(counterpart.position, dtype=float)
    moved = here + step * (there - here)
    return float(moved[0]), float(moved[1])
