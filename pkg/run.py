"""
run.py

Single entry point for the cultural market simulator.

Subcommands:
    run         run a configured simulation and write its bundle
    analyze     run detectors over a trace (exit 3 when any flags)
    gen-config  write the default configuration scaffold
    replay      re-run a trace's embedded config and diff the bundle
    scenario    run a scripted scenario
    dashboard   launch the read-only trace viewer

This file contains:
- NO simulation logic
- NO detector logic

Exit codes: 0 ok, 1 usage, 2 invalid config, 3 detector flagged,
4 I/O or corrupt trace, 5 malformed config syntax, 6 replay mismatch.
"""

import argparse
import subprocess
import sys
from pathlib import Path
from typing import List, Optional

from src.analysis.reports import DETECTORS
from src.config.settings import CONFIG_SYNTAX, ConfigError, load_config, with_overrides, write_default_config
from src.services.orchestrator import (
    ReplayRefused,
    analyze_trace,
    replay_trace,
    run_scenario,
    run_simulation,
)
from src.services.scenarios import SCENARIOS
from src.tracing.loaders import TraceFormatError
from src.utils.constants import (
    EXIT_CONFIG,
    EXIT_CONFIG_SYNTAX,
    EXIT_FLAGGED,
    EXIT_IO,
    EXIT_OK,
    EXIT_REPLAY_MISMATCH,
    EXIT_USAGE,
)
from src.utils.logger import get_logger, set_log_level


# =============================================================================
# CONFIGURATION
# =============================================================================

STREAMLIT_APP_PATH = "app.py"


class UsageError(Exception):
    """Bad command-line usage."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


# =============================================================================
# ARGUMENTS
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(description="Cultural market simulator")
    parser.add_argument("--log-level", default="INFO", help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run_p = sub.add_parser("run", help="Run a simulation")
    run_p.add_argument("--config", required=True, help="Path to YAML config")
    run_p.add_argument("--seed", type=int, default=None, help="Override run.seed")
    run_p.add_argument("--ticks", type=int, default=None, help="Override run.ticks")
    run_p.add_argument("--out", default=None, help="Bundle directory (overrides run.out_dir)")

    analyze_p = sub.add_parser("analyze", help="Run detectors over a trace")
    analyze_p.add_argument("--trace", required=True, help="Path to trace.csv")
    analyze_p.add_argument(
        "--detectors",
        default=",".join(DETECTORS),
        help=f"Comma-separated subset of {','.join(DETECTORS)}",
    )
    analyze_p.add_argument("--out", default=None, help="Report directory (defaults to the trace's)")
    analyze_p.add_argument("--plots", action="store_true", help="Also write HTML figures")

    gen_p = sub.add_parser("gen-config", help="Write the default config scaffold")
    gen_p.add_argument("--out", required=True, help="Destination YAML path")

    replay_p = sub.add_parser("replay", help="Re-verify determinism of a trace")
    replay_p.add_argument("--trace", required=True, help="Path to trace.csv")

    scenario_p = sub.add_parser("scenario", help="Run a scripted scenario")
    scenario_p.add_argument("--name", required=True, choices=sorted(SCENARIOS))
    scenario_p.add_argument("--out", required=True, help="Bundle directory")

    sub.add_parser("dashboard", help="Launch the read-only trace viewer")
    return parser


def _parse_detectors(text: str) -> List[str]:
    names = [d.strip() for d in text.split(",") if d.strip()]
    unknown = [d for d in names if d not in DETECTORS]
    if unknown or not names:
        raise UsageError(f"unknown detector(s): {unknown or text!r}. Known: {', '.join(DETECTORS)}")
    return names


# =============================================================================
# COMMANDS
# =============================================================================

def _cmd_run(args: argparse.Namespace) -> int:
    config = with_overrides(load_config(args.config), seed=args.seed, ticks=args.ticks, out_dir=args.out)
    run_simulation(config)
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    summary = analyze_trace(args.trace, _parse_detectors(args.detectors), args.out, args.plots)
    return EXIT_FLAGGED if summary.flagged else EXIT_OK


def _cmd_gen_config(args: argparse.Namespace) -> int:
    path = write_default_config(args.out)
    print(f"Default configuration written to {path}")
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    outcome = replay_trace(args.trace)
    if outcome.matched:
        print(f"Replay OK: {', '.join(outcome.checked)} identical")
        return EXIT_OK
    print(f"Replay MISMATCH: {', '.join(outcome.mismatched)}")
    return EXIT_REPLAY_MISMATCH


def _cmd_scenario(args: argparse.Namespace) -> int:
    run_scenario(args.name, args.out)
    return EXIT_OK


def _cmd_dashboard(args: argparse.Namespace) -> int:
    if not Path(STREAMLIT_APP_PATH).exists():
        raise FileNotFoundError(f"Streamlit app not found at: {STREAMLIT_APP_PATH}")
    print("=" * 60)
    print("Launching Cultural Market Trace Viewer")
    print("=" * 60)
    subprocess.run([sys.executable, "-m", "streamlit", "run", STREAMLIT_APP_PATH], check=True)
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "analyze": _cmd_analyze,
    "gen-config": _cmd_gen_config,
    "replay": _cmd_replay,
    "scenario": _cmd_scenario,
    "dashboard": _cmd_dashboard,
}


# =============================================================================
# ENTRY POINT
# =============================================================================

def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    logger = get_logger("cli")
    try:
        args = build_parser().parse_args(argv)
        try:
            set_log_level(args.log_level)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReplayRefused as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_SYNTAX if exc.kind == CONFIG_SYNTAX else EXIT_CONFIG
    except (FileNotFoundError, TraceFormatError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except KeyboardInterrupt:
        logger.warning("Shutdown requested by user.")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
