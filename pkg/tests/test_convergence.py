import itertools
from pathlib import Path

import numpy as np

from src.analysis.reports import settled_price_cv
from src.config.settings import load_config
from src.network.agents import cluster_labels
from src.services.engine import run
from src.services.orchestrator import render_bundle
from src.services.scenarios import CONVERGENCE_OBJECT, convergence_config


def test_two_clusters_settle_at_dispersed_prices():
    homogeneous = run(convergence_config(False, seed=0, size=50, ticks=200, spread=0.02))
    split = run(convergence_config(True, seed=0, size=50, ticks=200, spread=0.02))

    cv_homogeneous = settled_price_cv(homogeneous.records, CONVERGENCE_OBJECT)
    cv_split = settled_price_cv(split.records, CONVERGENCE_OBJECT)

    assert cv_homogeneous > 0
    assert 2 * cv_homogeneous <= cv_split


def test_clusters_stay_apart_on_the_field():
    config = convergence_config(True, seed=1, size=20, ticks=100, spread=0.02, topology="arcs")
    positions = run(config).snapshots["positions"]
    last = positions[positions["tick"] == config.run.ticks].sort_values("id")
    labels = cluster_labels(config.population.clusters)
    xy = last[["x", "y"]].to_numpy()

    intra, inter = [], []
    for i, j in itertools.combinations(range(len(labels)), 2):
        distance = float(np.linalg.norm(xy[i] - xy[j]))
        (intra if labels[i] == labels[j] else inter).append(distance)

    assert np.mean(intra) < np.mean(inter)


def test_cluster_fixture_runs_deterministically():
    config = load_config(Path(__file__).parent.parent / "configs" / "fixtures" / "two_clusters.yaml")

    assert render_bundle(run(config)) == render_bundle(run(config))
