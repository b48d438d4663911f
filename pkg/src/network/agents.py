"""
Agent State and Population Construction.

Purpose:
    Holds the mutable per-agent state (genome, kernel, field position,
    balance, holdings, ensemble shares) and builds seeded populations,
    either from uniformly random genomes or from kernel-cluster specs.

Constraints:
    - Positions start at the first two coordinates of the kernel anchor centroid
    - Population construction is a pure function of its seed
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.genome.representation import Genome, genome_from_parts, new_genome, universal_hash
from src.kernel.geometry import Kernel, build_kernel
from src.utils.helpers import draw_seed

HASH_MODE_RANDOM = "random"
HASH_MODE_UNIVERSAL = "universal"
HASH_MODES = (HASH_MODE_RANDOM, HASH_MODE_UNIVERSAL)


# =============================================================================
# DOMAIN TYPES
# =============================================================================

@dataclass
class AgentState:
    """One trader in the field."""
    id: int
    genome: Genome
    kernel: Kernel
    position: Tuple[float, float]
    balance: float
    holdings: Counter = field(default_factory=Counter)
    ensemble_shares: Counter = field(default_factory=Counter)

    def __post_init__(self) -> None:
        if len(self.position) != 2 or not np.all(np.isfinite(self.position)):
            raise ValueError(f"agent {self.id} position must be two finite reals, got {self.position}")

    @property
    def proposition_count(self) -> int:
        """K_x: propositions held, singletons plus ensemble shares."""
        return sum(self.holdings.values()) + sum(self.ensemble_shares.values())

    def receive(self, proposition_id: str) -> None:
        self.holdings[proposition_id] += 1

    def give(self, proposition_id: str) -> None:
        if self.holdings[proposition_id] < 1:
            raise ValueError(f"agent {self.id} does not hold {proposition_id}")
        self.holdings[proposition_id] -= 1
        if self.holdings[proposition_id] == 0:
            del self.holdings[proposition_id]


@dataclass(frozen=True)
class ClusterSpec:
    """
    A group of agents sharing an initial classificatory scheme.

    Attributes:
        size: Number of agents in the cluster.
        center: Anchor center in concept space.
        extent: Kernel width, applied to every dimension.
        spread: Standard deviation of anchor scatter around the center.
        flexibility: Shared flexibility gene, or None for a random draw.
        hash_mode: "random" or "universal".
    """
    size: int
    center: Tuple[float, ...]
    extent: float
    spread: float = 0.0
    flexibility: Optional[float] = None
    hash_mode: str = HASH_MODE_RANDOM

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"cluster size must be >= 1, got {self.size}")
        if not 0.0 < self.extent <= 1.0:
            raise ValueError(f"cluster extent must lie in (0, 1], got {self.extent}")
        if self.spread < 0:
            raise ValueError(f"cluster spread must be non-negative, got {self.spread}")
        if self.flexibility is not None and not 0.0 <= self.flexibility <= 1.0:
            raise ValueError(f"cluster flexibility must lie in [0, 1], got {self.flexibility}")
        if self.hash_mode not in HASH_MODES:
            raise ValueError(f"unknown hash_mode: {self.hash_mode}")


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def field_position(kernel: Kernel) -> Tuple[float, float]:
    """Project the anchor centroid onto the 2-D field."""
    centroid = kernel.anchor_centroid
    y = float(centroid[1]) if centroid.size > 1 else 0.0
    return float(centroid[0]), y


def _random_genome(
    seed: int, n_dims: int, n_anchors: int, hash_len: int, hash_mode: str
) -> Genome:
    g = new_genome(seed, n_dims, n_anchors, hash_len)
    if hash_mode == HASH_MODE_UNIVERSAL:
        g = genome_from_parts(g.extents, g.anchors, universal_hash(), g.flexibility_gene)
    return g


def _cluster_genome(
    spec: ClusterSpec, seed: int, n_anchors: int, hash_len: int
) -> Genome:
    rng = np.random.default_rng(seed)
    n_dims = len(spec.center)
    anchors = np.asarray(spec.center) + rng.normal(0.0, 1.0, size=(n_anchors, n_dims)) * spec.spread
    flexibility = rng.random() if spec.flexibility is None else spec.flexibility
    if spec.hash_mode == HASH_MODE_UNIVERSAL:
        hash_genes = universal_hash()
    else:
        hash_genes = new_genome(seed, 1, 1, hash_len).hash_genes
    return genome_from_parts(
        extents=[spec.extent] * n_dims,
        anchors=anchors.tolist(),
        hash_genes=hash_genes,
        flexibility=flexibility,
    )


def agent_from_genome(agent_id: int, genome: Genome, balance: float) -> AgentState:
    kernel = build_kernel(genome)
    return AgentState(
        id=agent_id,
        genome=genome,
        kernel=kernel,
        position=field_position(kernel),
        balance=balance,
    )


# =============================================================================
# PUBLIC API
# =============================================================================

def build_population(
    rng: np.random.Generator,
    size: int,
    n_dims: int,
    n_anchors: int,
    hash_len: int,
    initial_balance: float,
    hash_mode: str = HASH_MODE_RANDOM,
    clusters: Sequence[ClusterSpec] = (),
) -> List[AgentState]:
    """
    Build a seeded population.

    One genome seed is drawn from rng per agent, in agent-id order.
    With clusters, agents are assigned to clusters in listed order.

    Args:
        rng: Master generator (consumed).
        size: Number of agents.
        n_dims: Concept-space dimensionality.
        n_anchors: Anchors per kernel.
        hash_len: Hash-gene length for random hash strings.
        initial_balance: Starting balance of every agent.
        hash_mode: Hash mode for unclustered populations.
        clusters: Optional kernel-cluster specs (sizes sum to size).

    Returns:
        Agents sorted by id (0..size-1).

    Raises:
        ValueError: If sizes or cluster specs are inconsistent.
    """
    if size < 2:
        raise ValueError(f"population needs at least 2 agents, got {size}")
    if initial_balance < 0:
        raise ValueError(f"initial_balance must be non-negative, got {initial_balance}")
    if hash_mode not in HASH_MODES:
        raise ValueError(f"unknown hash_mode: {hash_mode}")

    if not clusters:
        return [
            agent_from_genome(
                i,
                _random_genome(draw_seed(rng), n_dims, n_anchors, hash_len, hash_mode),
                initial_balance,
            )
            for i in range(size)
        ]

    if sum(c.size for c in clusters) != size:
        raise ValueError(
            f"cluster sizes sum to {sum(c.size for c in clusters)}, population size is {size}"
        )
    for spec in clusters:
        if len(spec.center) != n_dims:
            raise ValueError(
                f"cluster center {spec.center} does not match n_dims={n_dims}"
            )

    agents: List[AgentState] = []
    for spec in clusters:
        for _ in range(spec.size):
            genome = _cluster_genome(spec, draw_seed(rng), n_anchors, hash_len)
            agents.append(agent_from_genome(len(agents), genome, initial_balance))
    return agents


def cluster_labels(clusters: Sequence[ClusterSpec]) -> List[int]:
    """Cluster index for each agent id, following build_population's assignment."""
    labels: List[int] = []
    for index, spec in enumerate(clusters):
        labels.extend([index] * spec.size)
    return labels
