import pandas as pd
import pytest

from src.config.settings import config_from_dict, config_hash, config_to_dict
from src.markets.records import TransactionRecord
from src.services.engine import run
from src.tracing.loaders import TraceFormatError, load_trace, parse_trace_text
from src.tracing.schema import TRACE_COLUMNS, TraceHeader, frame_to_records, records_to_frame
from src.tracing.writers import render_table, render_trace_text, write_trace


def _config(ticks=8):
    return config_from_dict({
        "population": {"size": 6},
        "genome": {"hash_mode": "universal"},
        "run": {"ticks": ticks, "seed": 5, "snapshot_every": 4},
        "catalog": [
            {"id": "A", "base_value": 100, "stimulus": [0.3, 0.3], "copies": 3},
            {"id": "B", "base_value": 60, "stimulus": [0.6, 0.4], "copies": 3},
        ],
        "ensembles": [{"id": "AB", "operator": 0, "members": ["A", "B"]}],
        "compositional": {"every": 2},
    })


def _header(config):
    return TraceHeader(seed=config.run.seed, config_hash=config_hash(config), config=config_to_dict(config))


def test_trace_text_round_trips_byte_for_byte():
    result = run(_config())
    text = render_trace_text(result.header, result.records)

    header, records = parse_trace_text(text)

    assert header.config_hash == result.header.config_hash
    assert header.seed == 5
    assert render_trace_text(header, records) == text


def test_bundle_round_trips_through_files(tmp_path):
    from src.services.orchestrator import render_bundle, write_bundle

    result = run(_config())
    write_bundle(result, tmp_path)
    trace = load_trace(tmp_path / "trace.csv")

    assert len(trace.records) == len(result.records)
    assert len(trace.rounds) == 4
    assert sorted(trace.snapshot("positions")["tick"].unique().tolist()) == [0, 4, 8]
    assert render_table(trace.snapshot("kernels"), trace.snapshot("kernels").columns) == render_bundle(result)["kernels.csv"]


def test_empty_trace_round_trips():
    config = _config()
    text = render_trace_text(_header(config), records_to_frame([]))

    header, records = parse_trace_text(text)

    assert records.empty
    assert list(records.columns) == TRACE_COLUMNS
    assert render_trace_text(header, records) == text


def test_records_convert_both_ways():
    record = TransactionRecord(
        tick=3, market="minimal", buyer_id=1, seller_id=2, object_ref="A", kind="complete",
        price=101.5, gain_buyer_pct=2.0, gain_seller_pct=1.0, minted=0.0, imitation=True, reason="imitation",
    )

    assert frame_to_records(records_to_frame([record])) == [record]


def test_tampered_config_is_rejected():
    result = run(_config(ticks=2))
    text = render_trace_text(result.header, result.records).replace('"size":6', '"size":7')

    with pytest.raises(TraceFormatError, match="config_hash"):
        parse_trace_text(text)


def test_decreasing_ticks_are_rejected():
    config = _config()
    rows = pd.DataFrame([
        {"tick": 2, "market": "minimal", "buyer": 0, "seller": 1, "object": "A", "kind": "bid",
         "price": 1.0, "gain_buyer_pct": 0.0, "gain_seller_pct": 0.0, "minted": 0.0,
         "imitation": False, "reason": "hash_fail"},
        {"tick": 1, "market": "minimal", "buyer": 0, "seller": 1, "object": "A", "kind": "bid",
         "price": 1.0, "gain_buyer_pct": 0.0, "gain_seller_pct": 0.0, "minted": 0.0,
         "imitation": False, "reason": "hash_fail"},
    ])

    with pytest.raises(TraceFormatError):
        parse_trace_text(render_trace_text(_header(config), rows))


def test_non_trace_files_are_rejected(tmp_path):
    path = tmp_path / "trace.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")

    with pytest.raises(TraceFormatError):
        load_trace(path)


def test_missing_trace(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_trace(tmp_path / "trace.csv")


def test_written_trace_has_header_lines(tmp_path):
    config = _config()
    path = write_trace(tmp_path / "t" / "trace.csv", _header(config), records_to_frame([]))

    lines = path.read_text(encoding="utf-8").splitlines()

    assert lines[0] == "# format: cultural-market-trace"
    assert lines[2] == "# seed: 5"
    assert lines[5] == ",".join(TRACE_COLUMNS)


def test_snapshot_with_broken_layout_is_rejected(tmp_path):
    from src.services.orchestrator import write_bundle

    write_bundle(run(_config()), tmp_path)
    kernels = tmp_path / "kernels.csv"
    kernels.write_text(kernels.read_text(encoding="utf-8").replace("hi_1", "hi_9", 1), encoding="utf-8")

    with pytest.raises(TraceFormatError, match="kernels"):
        load_trace(tmp_path / "trace.csv")
