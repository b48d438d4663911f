from pathlib import Path

import pytest

from src.config.settings import with_overrides
from src.services.orchestrator import (
    ReplayRefused,
    replay_trace,
    run_scenario,
    run_simulation,
    run_sweep,
)
from src.tracing.loaders import load_trace


def test_run_simulation_reports_the_bundle(tmp_path, short_ensembles_config):
    summary = run_simulation(short_ensembles_config, tmp_path / "run")

    assert summary.n_records == len(load_trace(summary.files["trace.csv"]).records)
    assert summary.execution_metadata["duration_seconds"] >= 0
    assert set(summary.files) >= {"trace.csv", "rounds.csv", "fundamentals.csv"}


def test_replay_compares_every_sibling(tmp_path, short_ensembles_config):
    summary = run_simulation(short_ensembles_config, tmp_path / "run")
    (summary.out_dir / "edges.csv").write_text("tick,kind,id_a,id_b\n", encoding="utf-8")

    outcome = replay_trace(summary.files["trace.csv"])

    assert not outcome.matched
    assert outcome.mismatched == ["edges.csv"]
    assert "kernels.csv" in outcome.checked


def test_replay_refuses_scenarios(tmp_path):
    summary = run_scenario("specialist_pair", tmp_path / "pair")

    with pytest.raises(ReplayRefused):
        replay_trace(summary.files["trace.csv"])


def test_unknown_scenario(tmp_path):
    with pytest.raises(ValueError, match="unknown scenario"):
        run_scenario("nope", tmp_path)


def test_sweep_writes_one_bundle_per_seed(tmp_path, ensembles_config):
    results = run_sweep(with_overrides(ensembles_config, ticks=2), [3, 1], tmp_path / "sweep", workers=2)

    assert [r["seed"] for r in results] == [3, 1]
    for row in results:
        trace = load_trace(Path(row["out_dir"]) / "trace.csv")
        assert trace.header.seed == row["seed"]
        assert len(trace.records) == row["n_records"]


def test_sweep_needs_seeds(tmp_path, short_ensembles_config):
    with pytest.raises(ValueError):
        run_sweep(short_ensembles_config, [], tmp_path)
