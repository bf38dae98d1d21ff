"""Index expressions: parsing, validation, canonical form, contractions, rewrites."""
from fractions import Fraction

import pytest

from dirac_bergmann.group_backends import euclidean_backend, so21_backend
from dirac_bergmann.tensor.components import independent_components, to_poly
from dirac_bergmann.tensor.contract import contract_deltas_etas, contract_epsilons
from dirac_bergmann.tensor.expr import canonicalize, equal, expand_covariant, render
from dirac_bergmann.tensor.parser import ParseError, parse_expr, parse_raw
from dirac_bergmann.tensor.rewrite import MacroTable, integrate_by_parts, replace_pattern
from dirac_bergmann.tensor.symbols import palatini_symbols

T = palatini_symbols()
SO21 = so21_backend()


def P(text):
    return parse_expr(text, T)


@pytest.mark.parametrize("text, where", [
    ("e[_a ^I] e[_b ^I]", "repeated"),
    ("e[_a ^I] + Pe[^a _I]", "free indices"),
    ("e[_a]", None),
    ("e[_a ^I", None),
    ("nosuch[_I]", None),
    ("e[_a ^I] +", None),
])
def test_malformed_input_raises_parse_error(text, where):
    with pytest.raises(ParseError) as err:
        P(text)
    if where:
        assert where in str(err.value)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        P("e[_a ^I] e[_b ^I]")
    assert "line 1" in str(err.value)


def test_dummy_renaming_gives_identical_canonical_form():
    a = P("PA[^a _I _J] e[_a ^J]")
    b = P("e[_b ^K] PA[^b _I _K]")
    assert a == b
    assert equal(a, b, T)


def test_antisymmetry_is_used_in_canonical_form():
    assert P("PA[^a _I _J] + PA[^a _J _I]").terms == ()
    assert P("PA[^a _J _I]") == P("-PA[^a _I _J]")


def test_epsilon_with_symmetric_pair_vanishes():
    assert P("epsI[_I _J _K] eta[^J ^K]").terms == ()


def test_coefficients_and_lambda_powers_combine():
    x = P("1/2 Lam e[_0 ^I] + 1/2 Lam e[_0 ^I] - Lam Lam e[_0 ^I]")
    assert len(x.terms) == 2
    assert {t.lam for t in x.terms} == {1, 2}
    assert {t.coeff for t in x.terms} == {Fraction(1), Fraction(-1)}


def test_render_round_trip():
    x = P("-1/2 eps0[^a ^b] epsI[_I _K _L] F[_a _b ^K ^L] + Lam e[_a ^J] PA[^a _I _J]")
    assert P(render(x)) == x


def test_delta_and_eta_contraction():
    x = contract_deltas_etas(parse_raw("delta[^J _I] eta[_J _K] e[_a ^K]", T), SO21, T)
    assert x == P("e[_a _I]")


def test_double_epsilon_contraction_so21():
    res = contract_epsilons(parse_raw("epsI[^I ^J ^K] epsI[_I _M _N] e[_a _J] e[_b _K]", T), SO21, T)
    assert res.expr == P("-e[_a _M] e[_b _N] + e[_a _N] e[_b _M]")


def test_double_epsilon_contraction_suppressed_without_identity():
    raw = parse_raw("epsI[^I ^J ^K] epsI[_I _M _N] e[_a _J] e[_b _K]", T)
    res = contract_epsilons(raw, euclidean_backend(), T)
    assert res.suppressed
    assert "not valid" in res.note
    assert equal(res.expr, raw, T)


def test_component_values_of_epsilon():
    p = to_poly(P("epsI[_I _J _K] e[_1 ^J] e[_2 ^K]"), T, SO21, {"I": 0})
    # eps_{0JK} = -eps^{0JK} for SO(2,1)
    e = lambda a, i: ("e", (a, i), ())
    manual = {(e(1, 2), e(2, 1)): Fraction(1), (e(1, 1), e(2, 2)): Fraction(-1)}
    assert {tuple(sorted(m)): c for m, c in p.terms.items()} == {tuple(sorted(m)): c for m, c in manual.items()}


def test_independent_components_of_connection():
    assert len(independent_components(T.get("A"))) == 9
    assert len(independent_components(T.get("e"))) == 9


def test_covariant_derivative_expansion():
    x = canonicalize(expand_covariant(P("D_a(e[_b ^I])"), T), T)
    assert x == P("d_a(e[_b ^I]) + A[_a ^I _J] e[_b ^J]")


def test_integration_by_parts_moves_derivative():
    x = P("d_a(Pe[^a _I]) e[_0 ^I]")
    y = integrate_by_parts(x, lambda f: f.symbol == "Pe", T)
    assert y == P("-Pe[^a _I] d_a(e[_0 ^I])")


def test_replace_pattern_and_macros():
    x = P("2 PA[^a _I _J] e[_a ^J]")
    y = replace_pattern(x, P("PA[^b _K _L] e[_b ^L]"), P("Pe[^0 _K]"), T)
    assert y == P("2 Pe[^0 _I]")
    macros = MacroTable(T)
    macros.define("M", P("D_a(PA[^a _I _J])"), antisym=((0, 1),))
    assert macros.expand(parse_expr("M[_I _J]", macros.table)) == P("D_a(PA[^a _I _J])")
