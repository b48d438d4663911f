"""
Simulation Configuration.

Loads a YAML configuration file into frozen dataclasses, filling
defaults and validating every value against its documented domain.

Purpose:
    - Parse and strictly validate configuration files (unknown keys are errors)
    - Provide the default scaffold written by `gen-config`
    - Convert configs to canonical dictionaries for the trace header

Constraints:
    - Only population.size, run.ticks and a non-empty catalog are required
    - config_from_dict(config_to_dict(c)) == c

Usage:
    from src.config.settings import load_config, config_to_dict
"""

import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import yaml

from src.genome.representation import MutationRates
from src.network.agents import HASH_MODE_RANDOM, HASH_MODES, ClusterSpec
from src.network.arcs import TOPOLOGIES, TOPOLOGY_ARCS
from src.utils.helpers import canonical_json, sha256_hex
from src.utils.logger import get_logger

logger = get_logger("config")

CONFIG_SYNTAX = "syntax"
CONFIG_INVALID = "invalid"

SECTIONS = (
    "population",
    "genome",
    "mutation",
    "market",
    "compositional",
    "network",
    "analysis",
    "run",
    "catalog",
    "ensembles",
)


class ConfigError(ValueError):
    """Configuration could not be parsed or failed validation."""

    def __init__(self, message: str, kind: str = CONFIG_INVALID):
        super().__init__(message)
        self.kind = kind


# =============================================================================
# CONFIGURATION SECTIONS
# =============================================================================

@dataclass(frozen=True)
class PopulationConfig:
    size: int
    initial_balance: float = 1000.0
    clusters: Tuple[ClusterSpec, ...] = ()


@dataclass(frozen=True)
class GenomeConfig:
    n_dims: int = 2
    n_anchors: int = 3
    hash_len: int = 32
    hash_mode: str = HASH_MODE_RANDOM


@dataclass(frozen=True)
class MarketConfig:
    allow_mint: bool = False


@dataclass(frozen=True)
class CompositionalConfig:
    """
    Attributes:
        every: Minimal ticks per compositional round (k).
        band: Target acceptance band [lo, hi].
        delta: Multiplicative price step.
        relink_after: Rounds below band before a relink (None disables).
    """
    every: int = 5
    band: Tuple[float, float] = (0.2, 0.8)
    delta: float = 0.05
    relink_after: Optional[int] = 3


@dataclass(frozen=True)
class NetworkConfig:
    topology: str = TOPOLOGY_ARCS
    imitation: bool = True
    familiarity_threshold: float = 0.3
    alpha_tol: float = 0.1
    step: float = 0.2
    scarcity_floor: float = 0.05


@dataclass(frozen=True)
class AnalysisConfig:
    fold_threshold: float = 2.0
    variance_ratio: float = 2.0
    outlier_k: float = 1.5
    bubble_window: int = 5
    gain_floor: float = 0.0
    bubble_fold: float = 1.5


@dataclass(frozen=True)
class RunConfig:
    ticks: int
    seed: int = 0
    snapshot_every: int = 10
    out_dir: str = "outputs/run"


@dataclass(frozen=True)
class CatalogItem:
    id: str
    base_value: float
    stimulus: Tuple[float, ...]
    copies: int = 1


@dataclass(frozen=True)
class EnsembleSpec:
    id: str
    operator: int
    members: Tuple[str, ...]
    linkage_factor: float = 1.0


@dataclass(frozen=True)
class SimulationConfig:
    """Complete, validated simulation configuration."""
    population: PopulationConfig
    run: RunConfig
    catalog: Tuple[CatalogItem, ...]
    genome: GenomeConfig = field(default_factory=GenomeConfig)
    mutation: MutationRates = field(default_factory=MutationRates)
    market: MarketConfig = field(default_factory=MarketConfig)
    compositional: CompositionalConfig = field(default_factory=CompositionalConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    ensembles: Tuple[EnsembleSpec, ...] = ()


# =============================================================================
# INTERNAL HELPERS
# =============================================================================

def _fail(message: str) -> ConfigError:
    logger.error(f"Invalid configuration: {message}")
    return ConfigError(message, CONFIG_INVALID)


def _check_keys(raw: Any, path: str, allowed: Tuple[str, ...]) -> Dict[str, Any]:
    if raw is None:
        return {}
    if not isinstance(raw, Mapping):
        raise _fail(f"'{path}' must be a mapping")
    for key in raw:
        if key not in allowed:
            raise _fail(f"unknown key '{path}.{key}'" if path else f"unknown key '{key}'")
    return dict(raw)


def _field_names(cls: type) -> Tuple[str, ...]:
    return tuple(f.name for f in fields(cls))


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(f"'{path}' must be a number, got {value!r}")
    try:
        number = float(value)
    except OverflowError:
        number = math.inf
    if not math.isfinite(number):
        raise _fail(f"'{path}' must be finite, got {value!r}")
    return number


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(f"'{path}' must be an integer, got {value!r}")
    return value


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise _fail(f"'{path}' must be true or false, got {value!r}")
    return value


def _text(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise _fail(f"'{path}' must be a non-empty string, got {value!r}")
    return value


def _vector(value: Any, path: str) -> Tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or not value:
        raise _fail(f"'{path}' must be a non-empty list of numbers")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _fail(message)


def _in_unit(value: float, path: str) -> None:
    _require(0.0 <= value <= 1.0, f"'{path}' must lie in [0, 1], got {value}")


def _parse_section(raw: Mapping[str, Any], name: str, cls: type, kinds: Mapping[str, str]) -> Dict[str, Any]:
    """Typed keyword arguments for a flat section dataclass."""
    section = _check_keys(raw.get(name), name, _field_names(cls))
    parsers = {"int": _integer, "float": _number, "bool": _boolean, "str": _text}
    parsed: Dict[str, Any] = {}
    for key, value in section.items():
        kind = kinds[key]
        if kind == "optional_int":
            parsed[key] = None if value is None else _integer(value, f"{name}.{key}")
        elif kind == "pair":
            pair = _vector(value, f"{name}.{key}")
            _require(len(pair) == 2, f"'{name}.{key}' must have exactly 2 values")
            parsed[key] = pair
        else:
            parsed[key] = parsers[kind](value, f"{name}.{key}")
    return parsed


def _parse_clusters(raw: Any) -> Tuple[ClusterSpec, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise _fail("'population.clusters' must be a list")

    clusters = []
    for i, entry in enumerate(raw):
        path = f"population.clusters[{i}]"
        spec = _check_keys(entry, path, _field_names(ClusterSpec))
        for required in ("size", "center", "extent"):
            _require(required in spec, f"'{path}.{required}' is required")
        flexibility = spec.get("flexibility")
        try:
            clusters.append(
                ClusterSpec(
                    size=_integer(spec["size"], f"{path}.size"),
                    center=_vector(spec["center"], f"{path}.center"),
                    extent=_number(spec["extent"], f"{path}.extent"),
                    spread=_number(spec.get("spread", 0.0), f"{path}.spread"),
                    flexibility=None if flexibility is None else _number(flexibility, f"{path}.flexibility"),
                    hash_mode=_text(spec.get("hash_mode", HASH_MODE_RANDOM), f"{path}.hash_mode"),
                )
            )
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise _fail(f"{path}: {exc}") from exc
    return tuple(clusters)


def _parse_catalog(raw: Any) -> Tuple[CatalogItem, ...]:
    if not isinstance(raw, list) or not raw:
        raise _fail("'catalog' must be a non-empty list of propositions")

    items = []
    for i, entry in enumerate(raw):
        path = f"catalog[{i}]"
        spec = _check_keys(entry, path, _field_names(CatalogItem))
        for required in ("id", "base_value", "stimulus"):
            _require(required in spec, f"'{path}.{required}' is required")
        items.append(
            CatalogItem(
                id=_text(spec["id"], f"{path}.id"),
                base_value=_number(spec["base_value"], f"{path}.base_value"),
                stimulus=_vector(spec["stimulus"], f"{path}.stimulus"),
                copies=_integer(spec.get("copies", 1), f"{path}.copies"),
            )
        )
    return tuple(items)


def _parse_ensembles(raw: Any) -> Tuple[EnsembleSpec, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise _fail("'ensembles' must be a list")

    ensembles = []
    for i, entry in enumerate(raw):
        path = f"ensembles[{i}]"
        spec = _check_keys(entry, path, _field_names(EnsembleSpec))
        for required in ("id", "operator", "members"):
            _require(required in spec, f"'{path}.{required}' is required")
        members = spec["members"]
        _require(isinstance(members, list), f"'{path}.members' must be a list")
        ensembles.append(
            EnsembleSpec(
                id=_text(spec["id"], f"{path}.id"),
                operator=_integer(spec["operator"], f"{path}.operator"),
                members=tuple(_text(m, f"{path}.members[{j}]") for j, m in enumerate(members)),
                linkage_factor=_number(spec.get("linkage_factor", 1.0), f"{path}.linkage_factor"),
            )
        )
    return tuple(ensembles)


def _validate(config: SimulationConfig) -> None:
    """Cross-field and domain checks."""
    pop, gen, comp, net, ana, run = (
        config.population,
        config.genome,
        config.compositional,
        config.network,
        config.analysis,
        config.run,
    )

    _require(pop.size >= 2, f"'population.size' must be >= 2, got {pop.size}")
    _require(pop.initial_balance >= 0, "'population.initial_balance' must be non-negative")
    if pop.clusters:
        total = sum(c.size for c in pop.clusters)
        _require(total == pop.size, f"cluster sizes sum to {total}, 'population.size' is {pop.size}")
        for i, cluster in enumerate(pop.clusters):
            _require(
                len(cluster.center) == gen.n_dims,
                f"'population.clusters[{i}].center' must have {gen.n_dims} coordinates",
            )

    for key in ("n_dims", "n_anchors", "hash_len"):
        _require(getattr(gen, key) >= 1, f"'genome.{key}' must be >= 1")
    _require(gen.hash_mode in HASH_MODES, f"'genome.hash_mode' must be one of {HASH_MODES}")

    _require(comp.every >= 1, "'compositional.every' must be >= 1")
    lo, hi = comp.band
    _require(0.0 <= lo <= hi <= 1.0, f"'compositional.band' must satisfy 0 <= lo <= hi <= 1, got {comp.band}")
    _require(0.0 < comp.delta < 1.0, f"'compositional.delta' must lie in (0, 1), got {comp.delta}")
    _require(
        comp.relink_after is None or comp.relink_after >= 1,
        "'compositional.relink_after' must be >= 1 or null",
    )

    _require(net.topology in TOPOLOGIES, f"'network.topology' must be one of {TOPOLOGIES}")
    _in_unit(net.familiarity_threshold, "network.familiarity_threshold")
    _require(net.alpha_tol >= 0, "'network.alpha_tol' must be non-negative")
    _require(0.0 < net.step <= 1.0, f"'network.step' must lie in (0, 1], got {net.step}")
    _require(0.0 < net.scarcity_floor <= 1.0, "'network.scarcity_floor' must lie in (0, 1]")

    _require(ana.fold_threshold >= 1.0, "'analysis.fold_threshold' must be >= 1")
    _require(ana.variance_ratio > 0, "'analysis.variance_ratio' must be positive")
    _require(ana.outlier_k > 0, "'analysis.outlier_k' must be positive")
    _require(ana.bubble_window >= 1, "'analysis.bubble_window' must be >= 1")
    _require(ana.bubble_fold > 0, "'analysis.bubble_fold' must be positive")

    _require(run.ticks >= 1, f"'run.ticks' must be >= 1, got {run.ticks}")
    _require(run.seed >= 0, "'run.seed' must be non-negative")
    _require(run.snapshot_every >= 1, "'run.snapshot_every' must be >= 1")

    ids = [item.id for item in config.catalog]
    _require(len(set(ids)) == len(ids), f"duplicate catalog ids: {ids}")
    for item in config.catalog:
        _require(
            0.0 < item.base_value < float("inf"),
            f"catalog '{item.id}': base_value must be finite and positive",
        )
        _require(
            len(item.stimulus) == gen.n_dims,
            f"catalog '{item.id}': stimulus must have {gen.n_dims} coordinates",
        )
        _require(item.copies >= 0, f"catalog '{item.id}': copies must be non-negative")

    ensemble_ids = [e.id for e in config.ensembles]
    _require(len(set(ensemble_ids)) == len(ensemble_ids), f"duplicate ensemble ids: {ensemble_ids}")
    for spec in config.ensembles:
        _require(spec.id not in ids, f"ensemble id '{spec.id}' collides with a catalog id")
        _require(0 <= spec.operator < pop.size, f"ensemble '{spec.id}': operator must be an agent id")
        _require(len(spec.members) >= 2, f"ensemble '{spec.id}': needs at least 2 members")
        _require(len(set(spec.members)) == len(spec.members), f"ensemble '{spec.id}': duplicate members")
        unknown = [m for m in spec.members if m not in ids]
        _require(not unknown, f"ensemble '{spec.id}': unknown members {unknown}")
        _require(spec.linkage_factor > 0, f"ensemble '{spec.id}': linkage_factor must be positive")


# =============================================================================
# PUBLIC API
# =============================================================================

def config_from_dict(raw: Any) -> SimulationConfig:
    """
    Build a validated SimulationConfig from a parsed mapping.

    Raises:
        ConfigError: On unknown keys, missing required keys or out-of-domain values.
    """
    root = _check_keys(raw, "", SECTIONS)
    for required, key in (("population", "size"), ("run", "ticks")):
        section = root.get(required)
        _require(isinstance(section, Mapping) and key in section, f"'{required}.{key}' is required")

    population_raw = _check_keys(root["population"], "population", _field_names(PopulationConfig))
    population = PopulationConfig(
        size=_integer(population_raw["size"], "population.size"),
        initial_balance=_number(population_raw.get("initial_balance", 1000.0), "population.initial_balance"),
        clusters=_parse_clusters(population_raw.get("clusters")),
    )

    mutation_kwargs = _parse_section(
        root, "mutation", MutationRates, {f.name: "float" for f in fields(MutationRates)}
    )
    try:
        mutation = MutationRates(**mutation_kwargs)
    except ValueError as exc:
        raise _fail(f"mutation: {exc}") from exc

    config = SimulationConfig(
        population=population,
        run=RunConfig(**_parse_section(
            root, "run", RunConfig,
            {"ticks": "int", "seed": "int", "snapshot_every": "int", "out_dir": "str"},
        )),
        catalog=_parse_catalog(root.get("catalog")),
        genome=GenomeConfig(**_parse_section(
            root, "genome", GenomeConfig,
            {"n_dims": "int", "n_anchors": "int", "hash_len": "int", "hash_mode": "str"},
        )),
        mutation=mutation,
        market=MarketConfig(**_parse_section(root, "market", MarketConfig, {"allow_mint": "bool"})),
        compositional=CompositionalConfig(**_parse_section(
            root, "compositional", CompositionalConfig,
            {"every": "int", "band": "pair", "delta": "float", "relink_after": "optional_int"},
        )),
        network=NetworkConfig(**_parse_section(
            root, "network", NetworkConfig,
            {
                "topology": "str",
                "imitation": "bool",
                "familiarity_threshold": "float",
                "alpha_tol": "float",
                "step": "float",
                "scarcity_floor": "float",
            },
        )),
        analysis=AnalysisConfig(**_parse_section(
            root, "analysis", AnalysisConfig,
            {
                "fold_threshold": "float",
                "variance_ratio": "float",
                "outlier_k": "float",
                "bubble_window": "int",
                "gain_floor": "float",
                "bubble_fold": "float",
            },
        )),
        ensembles=_parse_ensembles(root.get("ensembles")),
    )
    _validate(config)
    return config


def load_config(path: Union[str, Path]) -> SimulationConfig:
    """
    Load and validate a YAML configuration file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ConfigError: kind "syntax" for malformed YAML, "invalid" otherwise.
    """
    config_path = Path(path)
    if not config_path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        logger.error(f"Error parsing configuration file {config_path}: {exc}")
        raise ConfigError(f"malformed YAML in {config_path}: {exc}", CONFIG_SYNTAX) from exc

    if raw is None:
        raise _fail(f"configuration file {config_path} is empty")
    return config_from_dict(raw)


def config_to_dict(config: SimulationConfig) -> Dict[str, Any]:
    """Plain-data form of a config (lists instead of tuples)."""

    def _plain(value: Any) -> Any:
        if isinstance(value, tuple):
            return [_plain(v) for v in value]
        if hasattr(value, "__dataclass_fields__"):
            return {f.name: _plain(getattr(value, f.name)) for f in fields(value)}
        return value

    return {name: _plain(getattr(config, name)) for name in SECTIONS}


def config_hash(config: SimulationConfig) -> str:
    """SHA-256 of the canonical JSON form of the config."""
    return sha256_hex(canonical_json(config_to_dict(config)))


def default_config_dict() -> Dict[str, Any]:
    """Fully populated default scaffold (two objects, one ensemble)."""
    config = SimulationConfig(
        population=PopulationConfig(size=20),
        run=RunConfig(ticks=100),
        catalog=(
            CatalogItem(id="A", base_value=100.0, stimulus=(0.3, 0.3), copies=5),
            CatalogItem(id="B", base_value=60.0, stimulus=(0.6, 0.4), copies=5),
        ),
        ensembles=(EnsembleSpec(id="AB", operator=0, members=("A", "B")),),
    )
    return config_to_dict(config)


def write_default_config(path: Union[str, Path]) -> Path:
    """Write the default scaffold as YAML."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        yaml.safe_dump(default_config_dict(), f, sort_keys=False)
    return out


def with_overrides(
    config: SimulationConfig,
    seed: Optional[int] = None,
    ticks: Optional[int] = None,
    out_dir: Optional[str] = None,
) -> SimulationConfig:
    """Re-validated copy of a config with CLI overrides applied."""
    raw = config_to_dict(config)
    if seed is not None:
        raw["run"]["seed"] = seed
    if ticks is not None:
        raw["run"]["ticks"] = ticks
    if out_dir is not None:
        raw["run"]["out_dir"] = out_dir
    return config_from_dict(raw)
