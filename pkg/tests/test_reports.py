import json

import pytest

from src.analysis.reports import (
    DETECTORS,
    any_flagged,
    base_values_from_config,
    render_jsonl,
    render_text,
    run_detectors,
)
from src.services.orchestrator import analyze_trace, write_bundle
from src.services.scenarios import run_seven_node_cascade, run_specialist_generalist
from src.tracing.loaders import load_trace


def _cascade_trace(tmp_path):
    write_bundle(run_seven_node_cascade(), tmp_path)
    return load_trace(tmp_path / "trace.csv")


def _by_name(reports):
    return {r["report"]: r for r in reports}


def test_cascade_is_flagged_as_a_bubble(tmp_path):
    reports = _by_name(run_detectors(_cascade_trace(tmp_path)))

    assert reports["bubble"]["flagged"]
    assert reports["bubble"]["result"]["onset_tick"] == 1
    assert any_flagged(reports.values())


def test_every_run_carries_validation_and_prices(tmp_path):
    reports = run_detectors(_cascade_trace(tmp_path), ["bubble"])

    assert [r["report"] for r in reports] == ["validation", "prices", "bubble"]
    assert not reports[0]["flagged"]
    assert reports[1]["result"]["X"]["n_trades"] == 6


def test_unknown_detector_is_rejected(tmp_path):
    with pytest.raises(ValueError, match="astrology"):
        run_detectors(_cascade_trace(tmp_path), ["astrology"])


def test_single_trade_has_nothing_to_assess(tmp_path):
    write_bundle(run_specialist_generalist(), tmp_path)
    reports = _by_name(run_detectors(load_trace(tmp_path / "trace.csv")))

    assert reports["transitivity"]["result"] is None
    assert reports["regime"]["result"] is None
    assert not reports["transitivity"]["flagged"]


def test_text_and_json_renderings(tmp_path):
    reports = run_detectors(_cascade_trace(tmp_path))

    text = render_text(reports)
    lines = render_jsonl(reports).splitlines()

    assert "bubble.flagged=true" in text
    assert "validation.flagged=false" in text
    assert len(lines) == len(reports) == len(DETECTORS) + 2
    assert [json.loads(line)["report"] for line in lines] == [r["report"] for r in reports]


def test_analyze_writes_reports_and_figures(tmp_path):
    write_bundle(run_seven_node_cascade(), tmp_path)

    summary = analyze_trace(tmp_path / "trace.csv", plots=True, out_dir=tmp_path / "analysis")

    assert summary.flagged
    names = {p.name for p in summary.files}
    assert {"reports.txt", "reports.jsonl"} <= names
    assert any(name.endswith(".html") for name in names)
    assert all(p.exists() for p in summary.files)


def test_ensemble_base_values_sum_members():
    config = {
        "catalog": [{"id": "A", "base_value": 100.0}, {"id": "B", "base_value": 60.0}],
        "ensembles": [{"id": "AB", "members": ["A", "B"]}],
    }

    assert base_values_from_config(config) == {"A": 100.0, "B": 60.0, "AB": 160.0}
