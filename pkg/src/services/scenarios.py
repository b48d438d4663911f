"""
Scripted Scenarios.

Hand-built populations and trade schedules that reproduce illustrative
market episodes through the engine's own trade path:

    seven_node_cascade     one +20% trade followed by a chain of
                           imitating buyers (net-gain cascade)
    specialist_generalist  one trade between a narrow and a wide kernel
                           (asymmetric gains), or between two narrow
                           kernels (par trade)

Scripted traces carry an `origin` header line and cannot be replayed
from their config alone.
"""

from typing import Dict, List, Sequence, Tuple

from src.config.settings import SimulationConfig, config_from_dict
from src.genome.representation import genome_from_parts, universal_hash
from src.kernel.geometry import Kernel
from src.network.agents import AgentState, agent_from_genome, field_position
from src.services.engine import SimulationEngine, SimulationResult

CASCADE_OBJECT = "X"
CASCADE_SIZE = 7
CASCADE_SELLER = 1

Schedule = Dict[int, List[Tuple[int, int, str]]]


# =============================================================================
# AGENT BUILDERS
# =============================================================================

def specialist(agent_id: int, center: Sequence[float], width: float, flexibility: float, balance: float = 1000.0) -> AgentState:
    """Narrow kernel with a single anchor at its center."""
    genome = genome_from_parts([width] * len(center), [list(center)], universal_hash(), flexibility)
    return agent_from_genome(agent_id, genome, balance)


def generalist(agent_id: int, flexibility: float, balance: float = 1000.0) -> AgentState:
    """Unit-square kernel anchored at (2/3, 2/3) and the origin."""
    anchors = ((2.0 / 3.0, 2.0 / 3.0), (0.0, 0.0))
    kernel = Kernel(lo=(0.0, 0.0), hi=(1.0, 1.0), anchors=anchors, alpha=(1.0, 1.0))
    genome = genome_from_parts([1.0, 1.0], anchors, universal_hash(), flexibility)
    return AgentState(
        id=agent_id,
        genome=genome,
        kernel=kernel,
        position=field_position(kernel),
        balance=balance,
    )


def _scenario_config(size: int, ticks: int, base_value: float, copies: int) -> SimulationConfig:
    return config_from_dict({
        "population": {"size": size},
        "run": {"ticks": ticks, "snapshot_every": 1},
        "catalog": [
            {"id": CASCADE_OBJECT, "base_value": base_value, "stimulus": [0.5, 0.5], "copies": copies}
        ],
        "genome": {"hash_mode": "universal"},
        "network": {"topology": "complete", "imitation": True, "familiarity_threshold": 0.3},
    })


def run_schedule(engine: SimulationEngine, schedule: Schedule) -> SimulationResult:
    """Run every configured tick, executing the scheduled trades."""
    engine.snapshot(0)
    while engine.tick < engine.config.run.ticks:
        engine.step(scripted=schedule.get(engine.tick + 1, []))
    return engine.result()


# =============================================================================
# PUBLIC API
# =============================================================================

def seven_node_cascade() -> SimulationEngine:
    """
    Seven agents on a complete graph, one seller holding six copies of X.

    Agent 0 knows X well (perceived 120) and buys from agent 1 (perceived
    ~100) at tick 1 for a +20% gain. Agents 2..6 have X outside their
    kernels; at tick t agent t imitates the previous buyer, paying the
    observed price and adopting the observed valuation.
    """
    config = _scenario_config(CASCADE_SIZE, ticks=6, base_value=120.0, copies=6)
    agents = [specialist(0, (0.5, 0.5), width=0.4, flexibility=0.2), generalist(CASCADE_SELLER, 0.0)]
    agents += [specialist(i, (0.9, 0.9), width=0.2, flexibility=0.5) for i in range(2, CASCADE_SIZE)]
    for _ in range(6):
        agents[CASCADE_SELLER].receive(CASCADE_OBJECT)
    return SimulationEngine.from_agents(config, agents, origin="scenario:seven_node_cascade")


def cascade_schedule() -> Schedule:
    """Agent 0 buys at tick 1, then agents 2..6 buy one per tick."""
    buyers = [0] + list(range(2, CASCADE_SIZE))
    return {tick: [(buyer, CASCADE_SELLER, CASCADE_OBJECT)] for tick, buyer in enumerate(buyers, start=1)}


def run_seven_node_cascade() -> SimulationResult:
    return run_schedule(seven_node_cascade(), cascade_schedule())


def specialist_generalist(asymmetric: bool = True) -> SimulationEngine:
    """
    Two agents and one object (base 120): agent 0 buys from agent 1.

    Asymmetric: a specialist (perceived 120) buys from a generalist
    (perceived ~100), settling at 108. Symmetric: both are identical
    specialists and trade at par.
    """
    config = _scenario_config(2, ticks=1, base_value=120.0, copies=1)
    buyer = specialist(0, (0.5, 0.5), width=0.4, flexibility=0.2)
    if asymmetric:
        seller = generalist(1, flexibility=0.2)
        origin = "scenario:specialist_generalist"
    else:
        seller = specialist(1, (0.5, 0.5), width=0.4, flexibility=0.2)
        origin = "scenario:specialist_pair"
    seller.receive(CASCADE_OBJECT)
    return SimulationEngine.from_agents(config, [buyer, seller], origin=origin)


def run_specialist_generalist(asymmetric: bool = True) -> SimulationResult:
    return run_schedule(specialist_generalist(asymmetric), {1: [(0, 1, CASCADE_OBJECT)]})


SCENARIOS = {
    "seven_node_cascade": run_seven_node_cascade,
    "specialist_generalist": lambda: run_specialist_generalist(True),
    "specialist_pair": lambda: run_specialist_generalist(False),
}


# =============================================================================
# CONVERGENCE EXPERIMENT
# =============================================================================

CONVERGENCE_OBJECT = "X"


def convergence_config(
    two_clusters: bool,
    seed: int = 0,
    size: int = 50,
    ticks: int = 200,
    spread: float = 0.0,
    topology: str = "complete",
) -> SimulationConfig:
    """
    Homogeneous or two-cluster population trading one object.

    Every agent can key every price (universal hash) and imitation is
    off, so price dispersion comes from classification alone. The
    homogeneous population shares one kernel centered on the object; the
    second cluster of the split population frames the object near the
    edge of a wide kernel and values it at a tenth of the first.
    """
    half = size // 2
    near = {"center": [0.3, 0.3], "extent": 0.4, "spread": spread, "flexibility": 0.2, "hash_mode": "universal"}
    far = {"center": [0.75, 0.75], "extent": 1.0, "spread": spread, "flexibility": 0.2, "hash_mode": "universal"}
    clusters = (
        [dict(near, size=half), dict(far, size=size - half)]
        if two_clusters
        else [dict(near, size=size)]
    )
    return config_from_dict({
        "population": {"size": size, "clusters": clusters},
        "genome": {"hash_mode": "universal"},
        "network": {"topology": topology, "imitation": False},
        "run": {"ticks": ticks, "seed": seed, "snapshot_every": max(1, ticks // 4)},
        "catalog": [
            {"id": CONVERGENCE_OBJECT, "base_value": 100.0, "stimulus": [0.3, 0.3], "copies": half}
        ],
    })
