"""Every published result of every bundled config, one test per fixture.

Printed forms known not to hold are strict xfails: they must keep failing.
"""
import pytest

from dirac_bergmann.pipeline.fixtures import RESIDUAL, fixture_set
from dirac_bergmann.report import load_config
from dirac_bergmann.report.analysis import expected_outcome
from dirac_bergmann.report.config import bundled_configs

from conftest import analysis


def _cases():
    for name in bundled_configs():
        cfg = load_config(name)
        backend = cfg.build_backend()
        fx = fixture_set(cfg.fixture_set)
        if cfg.include:
            fx = [f for f in fx if f.id.startswith(cfg.include)]
        for f in fx:
            marks = []
            if expected_outcome(f, backend) == RESIDUAL:
                marks.append(pytest.mark.xfail(strict=True, reason=f.note or "printed form does not hold"))
            yield pytest.param(name, f.id, marks=marks, id=f"{name}|{f.id}")


@pytest.mark.parametrize("config,fixture_id", list(_cases()))
def test_fixture_reproduced(config, fixture_id):
    res = analysis(config).fixture(fixture_id)
    assert res["outcome"] is not None
    assert res["verdict"] == "reproduced", res["outcome"]


@pytest.mark.parametrize("config", bundled_configs())
def test_bundled_config_exits_cleanly(config):
    report = analysis(config)
    assert report.errors == []
    assert report.exit_code == 0
