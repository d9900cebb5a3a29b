"""
tests/conftest.py
=================
Fixtures partagées: zoo, configurations des solveurs, chemins des fichiers de test
"""

from pathlib import Path

import numpy as np
import pytest

from core.merit import DualSolveConfig
from core.zoo import default_zoo

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def zoo():
    return default_zoo()


@pytest.fixture
def builtin(zoo):
    """Fabrique: identifiant -> problème neuf."""
    return zoo.get


@pytest.fixture(scope="session")
def cfg():
    return DualSolveConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def corrupted_spec_path():
    return FIXTURES / "corrupted_metadata.json"


@pytest.fixture
def corrupted_spec_text(corrupted_spec_path):
    return corrupted_spec_path.read_text(encoding="utf-8")
