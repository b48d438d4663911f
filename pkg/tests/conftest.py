"""Pytest configuration: import path and shared config fixtures."""
import sys
from pathlib import Path

import pytest

# Add project root to Python path so 'src' module can be found
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

CONFIG_FIXTURES = project_root / "configs" / "fixtures"


@pytest.fixture
def ensembles_config():
    """Three objects, two ensembles, minting and drift on (20 ticks)."""
    from src.config.settings import load_config

    return load_config(CONFIG_FIXTURES / "with_ensembles.yaml")


@pytest.fixture
def short_ensembles_config(ensembles_config):
    from src.config.settings import with_overrides

    return with_overrides(ensembles_config, ticks=4)
