from collections import Counter
from pathlib import Path

import pytest

from src.config.settings import load_config, with_overrides
from src.services.engine import SimulationEngine, run
from src.services.orchestrator import render_bundle, write_bundle
from src.services.scenarios import (
    CASCADE_OBJECT,
    run_seven_node_cascade,
    run_specialist_generalist,
)
from src.tracing.loaders import load_trace
from src.tracing.schema import genome_columns, kernel_columns
from src.tracing.writers import render_table

CONFIGS = Path(__file__).parent.parent / "configs"


def _config(name):
    return load_config(CONFIGS / "fixtures" / name)


def _completes(records):
    return records[records["kind"] == "complete"].reset_index(drop=True)


# =============================================================================
# DETERMINISM
# =============================================================================

@pytest.mark.parametrize("path", ["fixtures/with_ensembles.yaml", "default.yaml"])
def test_same_seed_gives_identical_bundles(path):
    config = load_config(CONFIGS / path)

    assert render_bundle(run(config)) == render_bundle(run(config))


def test_different_seed_changes_the_population():
    config = _config("with_ensembles.yaml")
    first = run(config).snapshots["genomes"]
    second = run(with_overrides(config, seed=12)).snapshots["genomes"]

    assert not first.equals(second)


# =============================================================================
# CONSERVATION
# =============================================================================

def test_money_and_copies_are_conserved_every_tick(ensembles_config):
    config = ensembles_config
    copies = Counter({item.id: item.copies for item in config.catalog})
    engine = SimulationEngine(config)
    engine.snapshot(0)

    while engine.tick < config.run.ticks:
        engine.step()
        assert abs(engine.ledger_gap()) < 1e-6
        assert engine.holdings_total() == copies

    assert all(agent.balance >= -1e-9 for agent in engine.agents)


def test_snapshots_follow_the_schedule():
    result = run(_config("with_ensembles.yaml"))

    for name in ("genomes", "kernels", "positions", "fundamentals"):
        assert sorted(result.snapshots[name]["tick"].unique().tolist()) == [0, 5, 10, 15, 20]


def test_genome_and_kernel_snapshots_hold_one_row_per_agent():
    engine = SimulationEngine(_config("with_ensembles.yaml"))
    engine.snapshot(0)
    snapshots = engine.result().snapshots
    genomes, kernels = snapshots["genomes"], snapshots["kernels"]

    assert list(genomes.columns) == genome_columns(2, 3)
    assert list(kernels.columns) == kernel_columns(2)
    assert genomes["agent_id"].tolist() == [agent.id for agent in engine.agents]
    assert kernels["agent_id"].tolist() == [agent.id for agent in engine.agents]

    agent, genome_row, kernel_row = engine.agents[3], genomes.iloc[3], kernels.iloc[3]
    assert genome_row["hash_genes"] == agent.genome.hash_genes
    assert genome_row["flexibility"] == agent.genome.flexibility_gene
    assert (genome_row["extent_0"], genome_row["extent_1"]) == agent.genome.extents
    assert (genome_row["anchor_2_0"], genome_row["anchor_2_1"]) == agent.genome.anchors[2]
    assert (kernel_row["alpha_0"], kernel_row["lo_1"], kernel_row["hi_1"]) == (
        agent.kernel.alpha[0], agent.kernel.lo[1], agent.kernel.hi[1],
    )


def test_mixed_anchor_counts_leave_blank_anchor_cells(tmp_path):
    result = run_specialist_generalist()
    genomes = result.snapshots["genomes"]

    assert list(genomes.columns) == genome_columns(2, 2)
    assert genomes["anchor_0_0"].notna().all()
    assert genomes["anchor_1_0"].isna().any()

    write_bundle(result, tmp_path)
    loaded = load_trace(tmp_path / "trace.csv").snapshot("genomes")
    assert render_table(loaded, loaded.columns) == render_bundle(result)["genomes.csv"]


def test_one_round_per_ensemble_every_k_ticks():
    result = run(_config("with_ensembles.yaml"))

    assert len(result.rounds) == 20
    assert sorted(result.rounds["tick"].unique().tolist()) == list(range(2, 21, 2))
    assert (result.rounds["offer_price"] > 0).all()


def test_records_are_tick_ordered_and_typed():
    records = run(_config("with_ensembles.yaml")).records

    assert records["tick"].is_monotonic_increasing
    assert set(records["kind"]) <= {"bid", "complete"}
    assert set(records["market"]) <= {"minimal", "compositional"}
    assert (records["price"] >= 0).all()


def test_minted_money_is_recorded():
    result = run(_config("with_ensembles.yaml"))

    assert result.minted_total == pytest.approx(result.records["minted"].sum())


# =============================================================================
# SCRIPTED SCENARIOS
# =============================================================================

def test_specialist_buys_from_generalist():
    records = run_specialist_generalist(asymmetric=True).records

    assert len(records) == 1
    trade = records.iloc[0]
    assert trade["kind"] == "complete"
    assert trade["price"] == pytest.approx(108.0)
    assert trade["gain_buyer_pct"] == pytest.approx(100.0 / 9.0)
    assert trade["gain_seller_pct"] == pytest.approx(8.0)


def test_identical_specialists_trade_at_par():
    trade = run_specialist_generalist(asymmetric=False).records.iloc[0]

    assert trade["price"] == pytest.approx(120.0)
    assert trade["gain_buyer_pct"] == pytest.approx(0.0, abs=1e-9)
    assert trade["gain_seller_pct"] == pytest.approx(0.0, abs=1e-9)


def test_seven_node_cascade():
    result = run_seven_node_cascade()
    trades = _completes(result.records)

    assert trades["buyer"].tolist() == [0, 2, 3, 4, 5, 6]
    assert trades["tick"].tolist() == [1, 2, 3, 4, 5, 6]
    assert (trades["object"] == CASCADE_OBJECT).all()
    assert trades["imitation"].tolist() == [False, True, True, True, True, True]
    assert trades["price"].tolist() == pytest.approx([trades["price"].iloc[0]] * 6)
    assert trades["gain_buyer_pct"].tolist() == pytest.approx([20.0] * 6, abs=0.5)

    fundamentals = result.snapshots["fundamentals"]
    at_start = fundamentals[(fundamentals["tick"] == 0) & (fundamentals["object"] == CASCADE_OBJECT)]
    assert at_start["fundamental_value"].iloc[0] == pytest.approx(220.0 / 7.0)
    assert result.header.origin == "scenario:seven_node_cascade"
