"""Shared session fixtures: one cached analysis per bundled config."""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dirac_bergmann.report import load_config, run_analysis  # noqa: E402

_REPORTS = {}


def analysis(name):
    """Analysis report of a bundled config, computed once per test session."""
    if name not in _REPORTS:
        _REPORTS[name] = run_analysis(load_config(name))
    return _REPORTS[name]


@pytest.fixture(scope="session")
def reports():
    return analysis


@pytest.fixture(autouse=True)
def _no_seed_override(monkeypatch):
    monkeypatch.delenv("DIRAC_BERGMANN_SEED", raising=False)
