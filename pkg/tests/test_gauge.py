"""Gauge generator, induced transformations and the deformed Poincare algebra."""
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dirac_bergmann.gauge import (COMPOSITION, COVARIANT_LAW, apply_variation, castellani_generator,
                                  commutator_closes, compare_law, compare_variation, lagrangian_invariance,
                                  variation)
from dirac_bergmann.poly import Poly
from dirac_bergmann.report import load_config
from dirac_bergmann.report.analysis import _State

from strategies import jet_poly


@pytest.fixture(scope="module")
def setup():
    cfg = load_config("palatini-so21")
    state = _State(cfg.build_theory(), cfg)
    fams = state.get("classification").constraints
    return state.theory, castellani_generator(state.theory, fams)


def test_time_component_shifts_by_parameter_velocity(setup):
    theory, gen = setup
    got = variation(theory, gen, "e[_0 ^I]")
    assert sorted(got) == [(0,), (1,), (2,)]
    for (i,), p in got.items():
        (mono,) = p.terms
        (var,) = mono
        assert var[0] == "ve0" and var[1] == (i,) and len(var[2]) == 1


def test_spatial_triad_variation(setup):
    theory, gen = setup
    assert compare_variation(theory, gen, "e[_a ^I]", "D_a(ve[^I]) + ka[^I ^J] e[_a _J]").verdict == "exact"
    assert compare_variation(theory, gen, "e[_a ^I]", "D_a(ve[^I]) - ka[^I ^J] e[_a _J]").verdict == "residual"


def test_covariant_law_leaves_action_invariant(setup):
    theory, _ = setup
    ok, dl = lagrangian_invariance(theory)
    assert ok and dl          # a nonzero total divergence


def test_flipped_lambda_term_breaks_invariance(setup):
    theory, _ = setup
    bad = dict(COVARIANT_LAW, A="D_mu(De[^I ^J]) - Lam Th[^I] e[_mu ^J] + Lam Th[^J] e[_mu ^I]")
    ok, _ = lagrangian_invariance(theory, bad)
    assert not ok


def test_transformations_close(setup):
    theory, _ = setup
    assert commutator_closes(theory)
    wrong = dict(COMPOSITION)
    wrong["Th"] = (("I",), "De2[^I ^J] Th[_J] - De[^I ^J] Th2[_J]", None)
    assert not commutator_closes(theory, composition=wrong)


def test_compare_law_is_sensitive_to_sign(setup):
    theory, _ = setup
    assert compare_law(theory, "e", COVARIANT_LAW["e"], "D_mu(Th[^I]) + De[^J ^I] e[_mu _J]") == "exact"
    assert compare_law(theory, "e", COVARIANT_LAW["e"], "D_mu(Th[^I]) + De[^I ^J] e[_mu _J]") == "residual"


LAW = {"e": {(1, 0): Poly.var(("Th", (0,), (1,))), (2, 1): Poly.var(("Th", (1,), ()))}}


@settings(max_examples=300, deadline=None, suppress_health_check=list(HealthCheck))
@given(jet_poly(), jet_poly(), st.integers(-5, 5))
def test_apply_variation_is_a_derivation(p, q, c):
    d = lambda x: apply_variation(x, LAW)
    assert d(p * q) == d(p) * q + p * d(q)
    assert d(p + q.scale(Fraction(c))) == d(p) + d(q).scale(Fraction(c))
