from pathlib import Path

import pytest
import yaml

import run as cli
from src.config.settings import config_from_dict, config_hash, config_to_dict, load_config
from src.tracing.schema import TraceHeader, records_to_frame
from src.tracing.writers import write_trace

FIXTURES = Path(__file__).parent.parent / "configs" / "fixtures"


def _run(tmp_path, fixture="with_ensembles.yaml"):
    out = tmp_path / "bundle"
    assert cli.main(["run", "--config", str(FIXTURES / fixture), "--out", str(out)]) == 0
    return out / "trace.csv"


def _tamper_first_row(trace_path, index, value):
    lines = trace_path.read_text(encoding="utf-8").split("\n")
    first_row = next(i for i, line in enumerate(lines) if line and not line.startswith("#")) + 1
    fields = lines[first_row].split(",")
    fields[index] = value
    lines[first_row] = ",".join(fields)
    trace_path.write_text("\n".join(lines), encoding="utf-8")


def test_gen_config_writes_a_loadable_scaffold(tmp_path):
    out = tmp_path / "conf" / "default.yaml"

    assert cli.main(["gen-config", "--out", str(out)]) == 0
    assert load_config(out).population.size == 20


def test_run_writes_a_bundle(tmp_path):
    trace = _run(tmp_path)

    names = {p.name for p in trace.parent.iterdir()}
    assert {"trace.csv", "rounds.csv", "genomes.csv", "kernels.csv", "edges.csv",
            "positions.csv", "fundamentals.csv"} <= names


def test_run_overrides_seed_and_ticks(tmp_path):
    out = tmp_path / "short"
    code = cli.main([
        "run", "--config", str(FIXTURES / "with_ensembles.yaml"),
        "--seed", "2", "--ticks", "3", "--out", str(out),
    ])

    assert code == 0
    header = (out / "trace.csv").read_text(encoding="utf-8").split("\n")[2]
    assert header == "# seed: 2"


def test_replay_matches(tmp_path):
    trace = _run(tmp_path)

    assert cli.main(["replay", "--trace", str(trace)]) == 0


def test_replay_detects_tampering(tmp_path):
    trace = _run(tmp_path)
    _tamper_first_row(trace, 6, "12345.0")

    assert cli.main(["replay", "--trace", str(trace)]) == 6


def test_replay_refuses_scripted_traces(tmp_path):
    out = tmp_path / "cascade"
    assert cli.main(["scenario", "--name", "seven_node_cascade", "--out", str(out)]) == 0

    assert cli.main(["replay", "--trace", str(out / "trace.csv")]) == 1


def test_cascade_analysis_flags(tmp_path):
    out = tmp_path / "cascade"
    cli.main(["scenario", "--name", "seven_node_cascade", "--out", str(out)])

    assert cli.main(["analyze", "--trace", str(out / "trace.csv")]) == 3
    assert "bubble.flagged=true" in (out / "reports.txt").read_text(encoding="utf-8")


def test_unknown_detector_is_usage_error(tmp_path):
    trace = _run(tmp_path)

    assert cli.main(["analyze", "--trace", str(trace), "--detectors", "bubble,astrology"]) == 1


@pytest.mark.parametrize("argv", [[], ["fly"], ["run"], ["scenario", "--name", "nope", "--out", "x"]])
def test_bad_arguments_are_usage_errors(argv):
    assert cli.main(argv) == 1


def test_missing_config_is_io_error(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "missing.yaml")]) == 4


def test_malformed_yaml_exit_code(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("population: [size: 2\n", encoding="utf-8")

    assert cli.main(["run", "--config", str(path)]) == 5


def test_invalid_config_exit_code(tmp_path):
    raw = yaml.safe_load((FIXTURES / "minimal.yaml").read_text(encoding="utf-8"))
    raw["foo"] = 1
    path = tmp_path / "unknown.yaml"
    path.write_text(yaml.safe_dump(raw), encoding="utf-8")

    assert cli.main(["run", "--config", str(path)]) == 2


def test_missing_trace_is_io_error(tmp_path):
    assert cli.main(["analyze", "--trace", str(tmp_path / "trace.csv")]) == 4


def test_corrupt_trace_is_io_error(tmp_path):
    path = tmp_path / "trace.csv"
    path.write_text("# format: something-else\ntick\n1\n", encoding="utf-8")

    assert cli.main(["analyze", "--trace", str(path)]) == 4
    assert cli.main(["replay", "--trace", str(path)]) == 4


def test_empty_trace_analyzes_cleanly(tmp_path):
    config = config_from_dict(yaml.safe_load((FIXTURES / "minimal.yaml").read_text(encoding="utf-8")))
    header = TraceHeader(seed=0, config_hash=config_hash(config), config=config_to_dict(config))
    path = write_trace(tmp_path / "trace.csv", header, records_to_frame([]))

    assert cli.main(["analyze", "--trace", str(path)]) == 0
    text = (tmp_path / "reports.txt").read_text(encoding="utf-8")
    for name in ("fluctuation", "transitivity", "bubble", "regime"):
        assert f"{name}.result=null" in text


@pytest.mark.parametrize("index,value", [(11, "bogus"), (6, "-5.0"), (5, "refund")])
def test_out_of_vocabulary_trace_values_are_io_errors(tmp_path, index, value):
    trace = _run(tmp_path)
    _tamper_first_row(trace, index, value)

    assert cli.main(["analyze", "--trace", str(trace)]) == 4
    assert cli.main(["replay", "--trace", str(trace)]) == 4


@pytest.mark.parametrize("name", ["trace.csv", "genomes.csv"])
def test_undecodable_bundle_file_is_io_error(tmp_path, name):
    trace = _run(tmp_path)
    with open(trace.parent / name, "ab") as f:
        f.write(b"\xff\xfe\n")

    assert cli.main(["analyze", "--trace", str(trace)]) == 4


def test_nan_stimulus_is_config_error(tmp_path):
    text = (FIXTURES / "minimal.yaml").read_text(encoding="utf-8")
    path = tmp_path / "nan.yaml"
    path.write_text(text.replace("stimulus: [0.5, 0.5]", "stimulus: [.nan, 0.5]"), encoding="utf-8")

    assert cli.main(["run", "--config", str(path), "--out", str(tmp_path / "out")]) == 2
