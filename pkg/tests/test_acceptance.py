"""Acceptance criteria 1-10, one PASS/FAIL line each.

Every criterion runs its own fresh analysis (no shared cache) so the time
budget is measured honestly. Run directly with ``python tests/test_acceptance.py``
for the plain summary.
"""
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dirac_bergmann.pipeline.fixtures import ADJOINT, LAMBDA_ZERO, PALATINI, RESIDUAL, SO21_ONLY  # noqa: E402
from dirac_bergmann.report import load_config, run_analysis  # noqa: E402
from dirac_bergmann.report.analysis import SUPPRESSED, expected_outcome  # noqa: E402

TITLES = {
    1: "primary constraints, Hessian rank 0, six primaries",
    2: "secondary constraints, multiplier relations, fixed point",
    3: "bracket matrix entries and ranks at 100 random points",
    4: "first-class and second-class sets",
    5: "closure suite weak-zero under SO(2,1), residuals under Euclidean",
    6: "Dirac bracket table and closure",
    7: "degree-of-freedom count",
    8: "gauge variations, covariant laws, diffeomorphisms, Lambda=0 limit",
    9: "adjoint-mode constraints and algebra on two backends",
    10: "engine property suites on at least 1000 instances",
}
BUDGET = {1: 60, 2: 60, 3: 300, 4: 60, 5: 300, 6: 300, 7: 60, 8: 120, 9: 120, 10: 600}


def _verdicts_ok(config, fixtures):
    """All fixtures land where expected: reproduced, or suppressed for known misprints."""
    cfg = load_config(config)
    report = run_analysis(cfg, fixtures=fixtures)
    backend = cfg.build_backend()
    bad = []
    for f in fixtures:
        got = report.fixture(f.id)["verdict"]
        want = SUPPRESSED if expected_outcome(f, backend) == RESIDUAL else "reproduced"
        if got != want:
            bad.append(f"{config}:{f.id}={got}")
    return bad, report


def _criterion(n, fixtures=PALATINI, config="palatini-so21"):
    return _verdicts_ok(config, [f for f in fixtures if f.criterion == n])[0]


def check_1():
    return _criterion(1)


def check_2():
    return _criterion(2)


def check_3():
    bad = _criterion(3)
    if load_config("palatini-so21").samples < 100:
        bad.append("fewer than 100 sample points")
    return bad


def check_4():
    return _criterion(4)


def check_5():
    closure = [f for f in PALATINI if f.criterion == 5]
    bad, _ = _verdicts_ok("palatini-so21", closure)
    eu_bad, eu = _verdicts_ok("palatini-euclidean", closure)
    bad += eu_bad
    residual = [f["id"] for f in eu.fixtures if f["id"] in SO21_ONLY and f["verdict"] == SUPPRESSED]
    if not residual:
        bad.append("Euclidean backend shows no residual")
    return bad


def check_6():
    return _criterion(6)


def check_7():
    return _criterion(7)


def check_8():
    return _criterion(8) + _verdicts_ok("palatini-lambda-zero", list(LAMBDA_ZERO))[0]


def check_9():
    bad = []
    for config in ("adjoint-so21", "adjoint-so3"):
        bad += _verdicts_ok(config, list(ADJOINT))[0]
    return bad


def check_10():
    import test_properties as tp

    bad = []
    for name in sorted(dir(tp)):
        fn = getattr(tp, name)
        if not name.startswith("test_"):
            continue
        if fn._hypothesis_internal_use_settings.max_examples < 1000:
            bad.append(f"{name}: fewer than 1000 examples")
            continue
        try:
            fn()
        except Exception as exc:     # report, do not abort the other suites
            bad.append(f"{name}: {type(exc).__name__}")
    return bad


def run(n):
    start = time.perf_counter()
    try:
        bad = globals()[f"check_{n}"]()
    except Exception as exc:
        bad = [f"{type(exc).__name__}: {exc}"]
    secs = time.perf_counter() - start
    if secs > BUDGET[n]:
        bad.append(f"over budget ({secs:.0f}s > {BUDGET[n]}s)")
    status = "PASS" if not bad else "FAIL"
    line = f"criterion {n:2d}: {status}  {TITLES[n]} ({secs:.1f}s)"
    if bad:
        line += "  [" + "; ".join(bad[:4]) + "]"
    return not bad, line


@pytest.mark.parametrize("n", range(1, 11), ids=[f"criterion-{n}" for n in range(1, 11)])
def test_criterion(n, capsys):
    ok, line = run(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(n) for n in range(1, 11)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
