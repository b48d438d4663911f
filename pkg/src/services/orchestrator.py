"""
System Orchestrator.

High-level execution controller: runs simulations and scenarios, writes
run bundles, runs detectors over traces, and replays traces to verify
determinism. Records execution metadata and logs progress.

This module contains no simulation logic and no detector logic.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from src.analysis.figures import (
    network_figure,
    price_series_figure,
    valuation_plane_figure,
    write_figures,
)
from src.analysis.regimes import valuation_points_from_trace
from src.analysis.reports import (
    DETECTORS,
    any_flagged,
    base_values_from_config,
    run_detectors,
    settled_price_cv,
    write_reports,
)
from src.config.settings import SimulationConfig, config_from_dict, with_overrides
from src.services.engine import SimulationResult, run
from src.services.scenarios import CONVERGENCE_OBJECT, SCENARIOS, convergence_config
from src.tracing.loaders import SNAPSHOT_FILES, load_trace
from src.tracing.schema import ROUND_COLUMNS, Trace
from src.tracing.writers import render_table, render_trace_text, write_table, write_trace
from src.utils.constants import ROUNDS_FILE, TRACE_FILE
from src.utils.logger import get_logger

PathLike = Union[str, Path]


# =============================================================================
# RESULT TYPES
# =============================================================================

@dataclass
class RunSummary:
    """
    Attributes:
        out_dir: Bundle directory.
        files: Written file paths by name.
        n_records: Number of trace records.
        minted_total: Total money minted during the run.
        execution_metadata: Timing information.
    """
    out_dir: Path
    files: Dict[str, Path]
    n_records: int
    minted_total: float
    execution_metadata: Dict[str, Any] = field(default_factory=dict)


@dataclass
class AnalysisSummary:
    reports: List[Dict[str, Any]]
    flagged: bool
    files: List[Path]


@dataclass
class ReplayOutcome:
    matched: bool
    checked: List[str]
    mismatched: List[str]


class ReplayRefused(ValueError):
    """The trace cannot be replayed from its embedded config."""


# =============================================================================
# BUNDLE I/O
# =============================================================================

def render_bundle(result: SimulationResult) -> Dict[str, str]:
    """File name -> content for every file of a run bundle."""
    contents = {
        TRACE_FILE: render_trace_text(result.header, result.records),
        ROUNDS_FILE: render_table(result.rounds, ROUND_COLUMNS),
    }
    for name, file_name in SNAPSHOT_FILES.items():
        frame = result.snapshots[name]
        contents[file_name] = render_table(frame, frame.columns)
    return contents


def write_bundle(result: SimulationResult, out_dir: PathLike) -> Dict[str, Path]:
    directory = Path(out_dir)
    files = {
        TRACE_FILE: write_trace(directory / TRACE_FILE, result.header, result.records),
        ROUNDS_FILE: write_table(directory / ROUNDS_FILE, result.rounds, ROUND_COLUMNS),
    }
    for name, file_name in SNAPSHOT_FILES.items():
        frame = result.snapshots[name]
        files[file_name] = write_table(directory / file_name, frame, frame.columns)
    return files


# =============================================================================
# PUBLIC API
# =============================================================================

def _finish(result: SimulationResult, out_dir: PathLike, start_time: datetime, logger) -> RunSummary:
    files = write_bundle(result, out_dir)
    end_time = datetime.utcnow()
    duration = (end_time - start_time).total_seconds()

    logger.info(f"Execution time: {duration:.2f} seconds")
    logger.info(f"Trace records: {len(result.records):,}")
    logger.info(f"Bundle written to: {Path(out_dir)}")
    logger.info("=" * 60)

    return RunSummary(
        out_dir=Path(out_dir),
        files=files,
        n_records=len(result.records),
        minted_total=result.minted_total,
        execution_metadata={
            "start_time_utc": start_time.isoformat(),
            "end_time_utc": end_time.isoformat(),
            "duration_seconds": duration,
        },
    )


def run_simulation(config: SimulationConfig, out_dir: Optional[PathLike] = None) -> RunSummary:
    """
    Run a configured simulation and write its bundle.

    Args:
        config: Validated configuration.
        out_dir: Bundle directory (defaults to run.out_dir).
    """
    logger = get_logger("orchestrator")
    target = Path(out_dir or config.run.out_dir)

    logger.info("=" * 60)
    logger.info("CULTURAL MARKET SIMULATION")
    logger.info("=" * 60)
    logger.info(f"Population: {config.population.size}, ticks: {config.run.ticks}, seed: {config.run.seed}")

    start_time = datetime.utcnow()
    try:
        result = run(config)
        return _finish(result, target, start_time, logger)
    except Exception as exc:
        logger.error("Simulation FAILED")
        logger.exception(exc)
        logger.info("=" * 60)
        raise


def run_scenario(name: str, out_dir: PathLike) -> RunSummary:
    """Run a scripted scenario and write its bundle."""
    if name not in SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}. Known: {sorted(SCENARIOS)}")
    logger = get_logger("orchestrator")
    logger.info("=" * 60)
    logger.info(f"SCENARIO: {name}")
    logger.info("=" * 60)
    start_time = datetime.utcnow()
    return _finish(SCENARIOS[name](), out_dir, start_time, logger)


def analyze_trace(
    trace_path: PathLike,
    detectors: Sequence[str] = DETECTORS,
    out_dir: Optional[PathLike] = None,
    plots: bool = False,
) -> AnalysisSummary:
    """
    Run detectors over a trace and write reports next to it (or to out_dir).

    Raises:
        FileNotFoundError: If the trace does not exist.
        ValueError: On unknown detectors or a corrupt trace.
    """
    logger = get_logger("orchestrator")
    trace = load_trace(trace_path)
    target = Path(out_dir) if out_dir else Path(trace_path).parent

    reports = run_detectors(trace, detectors)
    files = list(write_reports(reports, target))
    if plots:
        files += write_figures(_figures(trace), target / "figures")

    flagged = any_flagged(reports)
    for report in reports:
        logger.info(f"{report['report']}: flagged={report['flagged']}")
    logger.info(f"Reports written to: {target}")
    return AnalysisSummary(reports=reports, flagged=flagged, files=files)


def _figures(trace: Trace) -> Dict[str, Any]:
    points = valuation_points_from_trace(trace.records, base_values_from_config(trace.header.config))
    figures = {
        "valuation_plane": valuation_plane_figure(points),
        "price_series": price_series_figure(trace.records),
    }
    positions = trace.snapshot("positions")
    if not positions.empty:
        last_tick = int(positions["tick"].max())
        figures["network"] = network_figure(trace.snapshot("edges"), positions, last_tick)
    return figures


def replay_trace(trace_path: PathLike) -> ReplayOutcome:
    """
    Re-run the trace's embedded config and compare every bundle file
    present next to the trace byte for byte.

    Raises:
        ReplayRefused: For scripted traces.
    """
    logger = get_logger("orchestrator")
    path = Path(trace_path)
    trace = load_trace(path)
    if trace.header.origin is not None:
        raise ReplayRefused(f"scripted trace ({trace.header.origin}) cannot be replayed from its config")

    config = config_from_dict(trace.header.config)
    expected = render_bundle(run(config))
    expected_trace = expected.pop(TRACE_FILE)

    checked, mismatched = [TRACE_FILE], []
    if path.read_text(encoding="utf-8") != expected_trace:
        mismatched.append(TRACE_FILE)
    for file_name, content in sorted(expected.items()):
        sibling = path.parent / file_name
        if sibling.exists():
            checked.append(file_name)
            if sibling.read_text(encoding="utf-8") != content:
                mismatched.append(file_name)

    logger.info(f"Replay checked {len(checked)} file(s), {len(mismatched)} mismatch(es)")
    return ReplayOutcome(matched=not mismatched, checked=checked, mismatched=mismatched)


# =============================================================================
# EXPERIMENTS
# =============================================================================

def _sweep_member(config: SimulationConfig) -> Dict[str, Any]:
    # Runs in a worker process; each member owns its engine and rng.
    result = run(config)
    write_bundle(result, config.run.out_dir)
    return {
        "seed": config.run.seed,
        "out_dir": config.run.out_dir,
        "n_records": len(result.records),
        "minted_total": result.minted_total,
    }


def run_sweep(
    config: SimulationConfig,
    seeds: Sequence[int],
    out_dir: PathLike,
    workers: Optional[int] = None,
) -> List[Dict[str, Any]]:
    """
    Run replicate seeds of one config in parallel processes.

    Each seed writes its bundle to out_dir/seed_<seed>. Results come back
    in seed order.
    """
    if not seeds:
        raise ValueError("a sweep needs at least one seed")
    logger = get_logger("orchestrator")
    base = Path(out_dir)
    members = [with_overrides(config, seed=s, out_dir=str(base / f"seed_{s}")) for s in seeds]

    logger.info("=" * 60)
    logger.info(f"SEED SWEEP: {len(members)} run(s), workers={workers or 'auto'}")
    logger.info("=" * 60)
    start_time = datetime.utcnow()

    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_sweep_member, members))

    duration = (datetime.utcnow() - start_time).total_seconds()
    logger.info(f"Sweep finished in {duration:.2f} seconds")
    return results


def run_convergence_experiment(
    seed: int = 0, size: int = 50, ticks: int = 200, spread: float = 0.02
) -> Dict[str, float]:
    """
    Coefficient of variation of settled prices for a homogeneous and a
    two-cluster population under the same seed.
    """
    logger = get_logger("orchestrator")
    outcome = {}
    for name, two_clusters in (("homogeneous", False), ("two_clusters", True)):
        result = run(convergence_config(two_clusters, seed=seed, size=size, ticks=ticks, spread=spread))
        outcome[name] = settled_price_cv(result.records, CONVERGENCE_OBJECT)
        logger.info(f"{name}: price CV = {outcome[name]:.4f}")
    return outcome
