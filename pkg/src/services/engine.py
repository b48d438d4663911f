"""
Simulation Engine - The Tick Loop.

Wires every module into one deterministic run. Each tick executes five
phases in order, then an optional drift step:

    1. Observation: premiums sampled on the previous tick's neighbor
       graph; each agent's acquisition pool (should_acquire) is fixed
    2. Minimal market: seeded maximal matching over neighbor edges, one
       offer per matched pair, imitation overrides, settlement
    3. Compositional market (every k-th tick): one auction round per
       ensemble, then feedback repricing
    4. Arcs and mobility: black/red arcs rebuilt; completed pairwise
       trading partners move toward each other
    5. Snapshots (tick 0, every snapshot_every ticks, last tick)
    6. Genome drift, when any mutation rate is non-zero

Randomness comes from a single PCG64 stream seeded once. Draw order:
population genome seeds (one per agent), catalog dealing (one per copy),
then per tick: edge permutation, per matched pair a role coin flip and,
when the seller has candidates, an object choice; finally one mutation
seed per agent when drift is on.

Constraints:
    - Settlements within a tick run sequentially in matching order
    - Identical config and seed give identical records and snapshots
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import pandas as pd

from src.analysis.bubbles import fundamental_value
from src.config.settings import SimulationConfig, config_hash, config_to_dict
from src.genome.mutation import mutate
from src.kernel.geometry import Stimulus, classify, rescale, with_anchors
from src.markets.compositional import Ensemble, auction_round, feedback_adjust, link
from src.markets.minimal import propose_trade, settle_pairwise
from src.markets.records import (
    KIND_COMPLETE,
    MARKET_MINIMAL,
    Proposition,
    RoundSummary,
    TransactionRecord,
)
from src.network.agents import AgentState, build_population
from src.network.arcs import ArcSet, move_agent, neighbor_graph, red_arcs, update_edges
from src.network.imitation import find_imitation_source, imitate
from src.network.observation import observation_criterion, observation_inputs, should_acquire
from src.tracing.schema import (
    KERNEL_FIELDS,
    SNAPSHOT_NAMES,
    TraceHeader,
    empty_frame,
    snapshot_dtypes,
    snapshot_layout,
    records_to_frame,
    rounds_to_frame,
)
from src.utils.helpers import draw_seed, make_rng
from src.utils.logger import get_logger
from src.valuation.gates import Valued

logger = get_logger("engine")


# =============================================================================
# RESULT TYPES
# =============================================================================

@dataclass
class SimulationResult:
    """Everything a run produces, ready for the writers."""
    header: TraceHeader
    records: pd.DataFrame
    rounds: pd.DataFrame
    snapshots: Dict[str, pd.DataFrame]
    minted_total: float = 0.0


@dataclass
class _SnapshotLog:
    columns: Dict[str, List[str]]
    rows: Dict[str, List[dict]] = field(
        default_factory=lambda: {name: [] for name in SNAPSHOT_NAMES}
    )

    def frames(self) -> Dict[str, pd.DataFrame]:
        frames = {}
        for name, columns in self.columns.items():
            rows = self.rows[name]
            if rows:
                frames[name] = pd.DataFrame(rows, columns=columns)
            else:
                frames[name] = empty_frame(columns, snapshot_dtypes(name, columns))
        return frames


# =============================================================================
# ENGINE
# =============================================================================

class SimulationEngine:
    """
    Deterministic simulator state plus the tick loop.

    Build with a config (population and holdings from the seed) or with
    `from_agents` for scripted scenarios.
    """

    def __init__(
        self,
        config: SimulationConfig,
        agents: Optional[Sequence[AgentState]] = None,
        origin: Optional[str] = None,
    ):
        self.config = config
        self.origin = origin
        self.rng = make_rng(config.run.seed)

        self.propositions: Dict[str, Proposition] = {
            item.id: Proposition(id=item.id, stimulus=Stimulus.of(item.stimulus), base_value=item.base_value)
            for item in config.catalog
        }

        if agents is None:
            self.agents = build_population(
                self.rng,
                size=config.population.size,
                n_dims=config.genome.n_dims,
                n_anchors=config.genome.n_anchors,
                hash_len=config.genome.hash_len,
                initial_balance=config.population.initial_balance,
                hash_mode=config.genome.hash_mode,
                clusters=config.population.clusters,
            )
            self._deal_catalog()
        else:
            self.agents = sorted(agents, key=lambda a: a.id)
            if [a.id for a in self.agents] != list(range(len(self.agents))):
                raise ValueError("scripted agents must have ids 0..N-1")

        self.by_id: Dict[int, AgentState] = {a.id: a for a in self.agents}
        self.ensembles: List[Ensemble] = [
            link(
                spec.operator,
                [self.propositions[m] for m in spec.members],
                spec.linkage_factor,
                ensemble_id=spec.id,
            )
            for spec in config.ensembles
        ]

        self.arcs = ArcSet(red=red_arcs(self.agents, config.network.alpha_tol))
        self.records: List[TransactionRecord] = []
        self.rounds: List[RoundSummary] = []
        self.minted_total = 0.0
        self.initial_money = self.total_balance()
        self._previous_minimal: List[TransactionRecord] = []
        self._snapshots = _SnapshotLog(snapshot_layout(
            n_dims=self.agents[0].kernel.n_dims,
            n_anchors=max(agent.genome.n_anchors for agent in self.agents),
        ))
        self.tick = 0

    @classmethod
    def from_agents(
        cls, config: SimulationConfig, agents: Sequence[AgentState], origin: str
    ) -> "SimulationEngine":
        """Engine over hand-built agents (holdings already assigned)."""
        return cls(config, agents=agents, origin=origin)

    # -------------------------------------------------------------------------
    # Ledger
    # -------------------------------------------------------------------------

    def total_balance(self) -> float:
        return float(sum(a.balance for a in self.agents))

    def ledger_gap(self) -> float:
        """Sum of balances minus (initial money + minted); zero up to rounding."""
        return self.total_balance() - (self.initial_money + self.minted_total)

    def holdings_total(self) -> Counter:
        total: Counter = Counter()
        for agent in self.agents:
            total.update(agent.holdings)
        return total

    # -------------------------------------------------------------------------
    # Setup
    # -------------------------------------------------------------------------

    def _deal_catalog(self) -> None:
        for item in self.config.catalog:
            for _ in range(item.copies):
                holder = int(self.rng.integers(len(self.agents)))
                self.agents[holder].receive(item.id)

    # -------------------------------------------------------------------------
    # Phase 1: observation
    # -------------------------------------------------------------------------

    def _acquisition_pools(self, graph: nx.Graph) -> Dict[int, Set[str]]:
        net = self.config.network
        pools: Dict[int, Set[str]] = {}
        for agent in self.agents:
            neighbors = [self.by_id[n] for n in sorted(graph.neighbors(agent.id))]
            wanted = set()
            for proposition in self.propositions.values():
                inputs = observation_inputs(agent, proposition, neighbors, net.scarcity_floor)
                if should_acquire(agent, proposition, observation_criterion(inputs)):
                    wanted.add(proposition.id)
            pools[agent.id] = wanted
        return pools

    # -------------------------------------------------------------------------
    # Phase 2: minimal market
    # -------------------------------------------------------------------------

    def _matching(self, graph: nx.Graph) -> List[Tuple[int, int]]:
        edges = sorted((min(a, b), max(a, b)) for a, b in graph.edges if a != b)
        order = self.rng.permutation(len(edges)) if edges else []
        matched: Set[int] = set()
        pairs = []
        for index in order:
            a, b = edges[int(index)]
            if a not in matched and b not in matched:
                matched.update((a, b))
                pairs.append((a, b))
        return pairs

    def _encounter(self, agent: AgentState, item: Valued) -> None:
        """Rescale the agent's kernel when the item fell outside it."""
        if classify(agent.kernel, item.stimulus) == 0.0:
            agent.kernel = rescale(agent.kernel, item.stimulus, agent.genome.flexibility_gene)

    def execute_trade(
        self,
        buyer: AgentState,
        seller: AgentState,
        proposition: Proposition,
        tick: int,
        neighbor_ids: Set[int],
        observed: Sequence[TransactionRecord],
    ) -> TransactionRecord:
        """
        One pairwise evaluation: imitation check, offer, settlement, encounters.

        Args:
            buyer: Evaluating agent.
            seller: Agent holding the proposition.
            proposition: Offered proposition.
            tick: Current tick.
            neighbor_ids: The buyer's first-order neighbors.
            observed: Completed pairwise records visible as imitation sources.
        """
        net = self.config.network
        signal = None
        if net.imitation and classify(buyer.kernel, proposition.stimulus) < net.familiarity_threshold:
            source = find_imitation_source(observed, proposition.id, neighbor_ids - {buyer.id})
            if source is not None:
                _, signal = imitate(
                    buyer, self.by_id[source.buyer_id], proposition, source, net.familiarity_threshold
                )

        offer = propose_trade(seller, proposition)
        record = settle_pairwise(
            buyer,
            seller,
            offer,
            self.config.market.allow_mint,
            proposition=proposition,
            tick=tick,
            imitation=signal,
        )
        self.minted_total += record.minted
        self._encounter(buyer, proposition)
        self._encounter(seller, proposition)
        return record

    def _minimal_market(
        self, tick: int, graph: nx.Graph, pools: Dict[int, Set[str]]
    ) -> List[TransactionRecord]:
        records: List[TransactionRecord] = []
        for a, b in self._matching(graph):
            seller, buyer = (self.by_id[a], self.by_id[b])
            if self.rng.random() >= 0.5:
                seller, buyer = buyer, seller
            if not seller.holdings:
                seller, buyer = buyer, seller
            if not seller.holdings:
                continue

            candidates = sorted(p for p in seller.holdings if p in pools[buyer.id])
            if not candidates:
                continue
            proposition = self.propositions[candidates[int(self.rng.integers(len(candidates)))]]

            observed = self._previous_minimal + records
            neighbor_ids = set(graph.neighbors(buyer.id))
            records.append(self.execute_trade(buyer, seller, proposition, tick, neighbor_ids, observed))
        return records

    # -------------------------------------------------------------------------
    # Phase 3: compositional market
    # -------------------------------------------------------------------------

    def _compositional_market(self, tick: int) -> List[TransactionRecord]:
        comp = self.config.compositional
        records: List[TransactionRecord] = []
        updated = []
        for ensemble in self.ensembles:
            result = auction_round(ensemble, self.agents, tick, self.config.market.allow_mint)
            records.extend(result.records)
            self.minted_total += sum(r.minted for r in result.records)
            self.rounds.append(result.summary(tick, ensemble.offer_price))
            for agent in self.agents:
                self._encounter(agent, ensemble)

            member_scores = {
                m: sum(classify(a.kernel, self.propositions[m].stimulus) for a in self.agents) / len(self.agents)
                for m in ensemble.members
            }
            updated.append(
                feedback_adjust(
                    ensemble,
                    result,
                    comp.band,
                    comp.delta,
                    relink_after=comp.relink_after,
                    member_scores=member_scores,
                    catalog=self.propositions,
                )
            )
        self.ensembles = updated
        return records

    # -------------------------------------------------------------------------
    # Phase 4: arcs and mobility
    # -------------------------------------------------------------------------

    def _update_network(self, tick_records: Sequence[TransactionRecord]) -> None:
        net = self.config.network
        self.arcs = update_edges(self.agents, tick_records, net.alpha_tol)

        for record in tick_records:
            if record.market != MARKET_MINIMAL or record.kind != KIND_COMPLETE:
                continue
            buyer, seller = self.by_id[record.buyer_id], self.by_id[record.seller_id]
            buyer_to = move_agent(buyer, seller, net.step)
            seller_to = move_agent(seller, buyer, net.step)
            buyer.position, seller.position = buyer_to, seller_to

    # -------------------------------------------------------------------------
    # Phase 5: snapshots
    # -------------------------------------------------------------------------

    def snapshot(self, tick: int) -> None:
        rows = self._snapshots.rows
        for agent in self.agents:
            g = agent.genome
            genome_row = {
                "tick": tick,
                "agent_id": agent.id,
                "flexibility": g.flexibility_gene,
                "hash_genes": g.hash_genes,
            }
            for d, extent in enumerate(g.extents):
                genome_row[f"extent_{d}"] = extent
            for m, anchor in enumerate(g.anchors):
                for d, coord in enumerate(anchor):
                    genome_row[f"anchor_{m}_{d}"] = coord
            rows["genomes"].append(genome_row)

            k = agent.kernel
            kernel_row = {"tick": tick, "agent_id": agent.id}
            for name in KERNEL_FIELDS:
                for d, value in enumerate(getattr(k, name)):
                    kernel_row[f"{name}_{d}"] = value
            rows["kernels"].append(kernel_row)
            rows["positions"].append({
                "tick": tick, "id": agent.id, "x": agent.position[0], "y": agent.position[1],
            })
        for kind, a, b in self.arcs.rows():
            rows["edges"].append({"tick": tick, "kind": kind, "id_a": a, "id_b": b})

        items: List[Valued] = list(self.propositions.values()) + list(self.ensembles)
        for item in items:
            rows["fundamentals"].append({
                "tick": tick,
                "object": item.id,
                "fundamental_value": fundamental_value(item, self.agents),
            })

    # -------------------------------------------------------------------------
    # Phase 6: genome drift
    # -------------------------------------------------------------------------

    def _drift(self) -> None:
        rates = self.config.mutation
        for agent in self.agents:
            agent.genome = mutate(agent.genome, rates, draw_seed(self.rng))
            if rates.anchor_jitter_sd > 0:
                agent.kernel = with_anchors(agent.kernel, agent.genome.anchors)

    # -------------------------------------------------------------------------
    # Tick loop
    # -------------------------------------------------------------------------

    def _scripted_market(
        self, tick: int, graph: nx.Graph, trades: Sequence[Tuple[int, int, str]]
    ) -> List[TransactionRecord]:
        records: List[TransactionRecord] = []
        for buyer_id, seller_id, proposition_id in trades:
            buyer, seller = self.by_id[buyer_id], self.by_id[seller_id]
            observed = self._previous_minimal + records
            neighbor_ids = set(graph.neighbors(buyer_id))
            records.append(
                self.execute_trade(buyer, seller, self.propositions[proposition_id], tick, neighbor_ids, observed)
            )
        return records

    def step(self, scripted: Optional[Sequence[Tuple[int, int, str]]] = None) -> List[TransactionRecord]:
        """
        Advance one tick; returns the tick's records.

        Args:
            scripted: (buyer, seller, proposition) trades replacing the
                observation and matching phases for this tick.
        """
        tick = self.tick + 1
        net = self.config.network

        graph = neighbor_graph([a.id for a in self.agents], self.arcs, net.topology)
        if scripted is None:
            pools = self._acquisition_pools(graph)
            minimal = self._minimal_market(tick, graph, pools)
        else:
            minimal = self._scripted_market(tick, graph, scripted)

        compositional: List[TransactionRecord] = []
        if self.ensembles and tick % self.config.compositional.every == 0:
            compositional = self._compositional_market(tick)

        tick_records = minimal + compositional
        self._update_network(tick_records)

        if tick % self.config.run.snapshot_every == 0 or tick == self.config.run.ticks:
            self.snapshot(tick)
        if not self.config.mutation.is_zero:
            self._drift()

        self.records.extend(tick_records)
        self._previous_minimal = minimal
        self.tick = tick

        logger.debug(
            f"Tick {tick}: {len(minimal)} pairwise, {len(compositional)} auction records, "
            f"{sum(1 for r in tick_records if r.kind == KIND_COMPLETE)} completed"
        )
        return tick_records

    def header(self) -> TraceHeader:
        return TraceHeader(
            seed=self.config.run.seed,
            config_hash=config_hash(self.config),
            config=config_to_dict(self.config),
            origin=self.origin,
        )

    def result(self) -> SimulationResult:
        return SimulationResult(
            header=self.header(),
            records=records_to_frame(self.records),
            rounds=rounds_to_frame(self.rounds),
            snapshots=self._snapshots.frames(),
            minted_total=self.minted_total,
        )

    def run(self) -> SimulationResult:
        """Run all configured ticks from the current state."""
        cfg = self.config
        logger.info(
            f"Starting run: N={len(self.agents)}, ticks={cfg.run.ticks}, seed={cfg.run.seed}, "
            f"objects={len(self.propositions)}, ensembles={len(self.ensembles)}"
        )
        if self.tick == 0:
            self.snapshot(0)
        while self.tick < cfg.run.ticks:
            self.step()

        completed = sum(1 for r in self.records if r.kind == KIND_COMPLETE)
        logger.info(
            f"Run finished: {len(self.records):,} records, {completed:,} completed, "
            f"minted {self.minted_total:.2f}"
        )
        return self.result()


def run(config: SimulationConfig) -> SimulationResult:
    """Run a simulation from a validated config."""
    return SimulationEngine(config).run()
