"""Property tests: rewrites preserve component values, brackets obey their algebra."""
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dirac_bergmann.group_backends import backend_by_name
from dirac_bergmann.phase_space import (check_antisymmetry_jacobi, local_bracket, palatini_phase_space,
                                        poisson_bracket)
from dirac_bergmann.poly import Poly, euler, is_divergence
from dirac_bergmann.tensor.components import to_poly
from dirac_bergmann.tensor.contract import contract_deltas_etas, contract_epsilons
from dirac_bergmann.tensor.expr import canonicalize, expand_covariant, render
from dirac_bergmann.tensor.parser import parse_expr, parse_raw
from dirac_bergmann.tensor.rewrite import integrate_by_parts
from dirac_bergmann.tensor.symbols import palatini_symbols

from strategies import FIELD_JETS, jet_poly, vector_expr

MANY = settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))

TABLE = palatini_symbols()
SO21 = backend_by_name("so21")
PS = palatini_phase_space(TABLE, SO21)


def components(x):
    return [to_poly(x, TABLE, SO21, {"I": i}) for i in range(3)]


# -- index expressions -------------------------------------------------------

@MANY
@given(vector_expr())
def test_canonicalize_is_idempotent(text):
    c = canonicalize(parse_raw(text, TABLE), TABLE)
    assert canonicalize(c, TABLE) == c


@MANY
@given(vector_expr())
def test_canonicalize_preserves_components(text):
    raw = parse_raw(text, TABLE)
    assert components(canonicalize(raw, TABLE)) == components(raw)


@MANY
@given(vector_expr())
def test_render_parse_round_trip(text):
    c = parse_expr(text, TABLE)
    assert parse_expr(render(c), TABLE) == c


@MANY
@given(vector_expr())
def test_epsilon_contraction_preserves_components(text):
    raw = parse_raw(text, TABLE)
    res = contract_epsilons(raw, SO21, TABLE)
    assert components(res.expr) == components(raw)


@MANY
@given(vector_expr())
def test_delta_eta_contraction_preserves_components(text):
    raw = parse_raw(text, TABLE)
    assert components(contract_deltas_etas(raw, SO21, TABLE)) == components(raw)


@MANY
@given(vector_expr())
def test_covariant_expansion_preserves_components(text):
    raw = parse_raw(text, TABLE)
    assert components(expand_covariant(raw, TABLE)) == components(raw)


@MANY
@given(vector_expr(max_terms=2), st.sampled_from(["PA", "Pe", "e", "A"]))
def test_integration_by_parts_preserves_integral(text, frozen):
    x = parse_raw(f"({text}) e[_0 ^I]", TABLE)
    moved = integrate_by_parts(x, lambda f: f.symbol == frozen, TABLE)
    assert all(not (f.symbol == frozen and f.derivs and f.derivs[-1].slot.kind != "time")
               for t in moved.terms for f in t.factors) or frozen == "e"
    assert is_divergence(to_poly(moved, TABLE, SO21) - to_poly(x, TABLE, SO21))


# -- jet polynomials against sympy -------------------------------------------

X, Y = sympy.symbols("x y")
DIRS = {1: X, 2: Y}


def to_sympy(p: Poly):
    out = 0
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for name, comps, derivs in mono:
            f = sympy.Function(name + "_" + "".join(map(str, comps)))(X, Y)
            for d in derivs:
                f = sympy.diff(f, DIRS[d])
            term *= f
        out += term
    return sympy.expand(out)


@MANY
@given(jet_poly(param="s1"), st.sampled_from([1, 2]))
def test_total_derivative_matches_sympy(p, d):
    assert sympy.expand(to_sympy(p.total_derivative(d)) - sympy.diff(to_sympy(p), DIRS[d])) == 0


@MANY
@given(jet_poly(param="s1"), jet_poly(param="s2"))
def test_explicit_divergences_are_detected(p, q):
    assert is_divergence(p.total_derivative(1) + q.total_derivative(2))


ULTRALOCAL = [v for v in FIELD_JETS if not v[2]]


@st.composite
def ultralocal_poly(draw):
    p = Poly()
    for _ in range(draw(st.integers(1, 3))):
        mono = Poly.const(Fraction(draw(st.integers(-4, 4).filter(bool)), draw(st.integers(1, 3))))
        for _ in range(draw(st.integers(1, 3))):
            mono = mono * Poly.var(draw(st.sampled_from(ULTRALOCAL)))
        p = p + mono
    return p


def sympy_bracket(f, g):
    """Finite-dimensional bracket of ultralocal densities, straight from partial derivatives."""
    fs, gs = to_sympy(f), to_sympy(g)
    out = 0
    for (qn, qc), (pn, pc), w in PS.pairs:
        q = sympy.Function(qn + "_" + "".join(map(str, qc)))(X, Y)
        m = sympy.Function(pn + "_" + "".join(map(str, pc)))(X, Y)
        w = sympy.Rational(Fraction(w).numerator, Fraction(w).denominator)
        out += w * (sympy.diff(fs, q) * sympy.diff(gs, m) - sympy.diff(fs, m) * sympy.diff(gs, q))
    return sympy.expand(out)


@MANY
@given(ultralocal_poly(), ultralocal_poly())
def test_ultralocal_bracket_matches_partial_derivatives(f, g):
    assert sympy.expand(to_sympy(poisson_bracket(f, g, PS)) - sympy_bracket(f, g)) == 0


@MANY
@given(jet_poly(param="s1"), jet_poly(param="s2"))
def test_bracket_is_antisymmetric_up_to_divergence(f, g):
    assert is_divergence(poisson_bracket(f, g, PS) + poisson_bracket(g, f, PS))


@MANY
@given(jet_poly(param="s1"), jet_poly(param="s2"), jet_poly(param="s3"))
def test_jacobi_identity(f, g, h):
    ok, residual = check_antisymmetry_jacobi(f, g, h, PS)
    assert ok, residual


@MANY
@given(jet_poly(max_degree=1), jet_poly(max_degree=1), jet_poly(param="s1"), st.integers(0, 10 ** 6))
def test_local_bracket_leibniz(c, d, g, seed):
    lhs = local_bracket(c * d, g, PS)
    rhs = c * local_bracket(d, g, PS) + local_bracket(c, g, PS) * d
    assert lhs == rhs
    # random rational point as a second oracle
    rng = random.Random(seed)
    vals = {}
    for v in (lhs - rhs).variables() | lhs.variables():
        vals[v] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    assert lhs.evaluate(vals) == rhs.evaluate(vals)


@MANY
@given(jet_poly(param="s1"), st.sampled_from(sorted({(v[0], v[1]) for v in FIELD_JETS})))
def test_euler_annihilates_divergences(p, field):
    assert not euler(p.total_derivative(1), field)
    assert not euler(p.total_derivative(2), field)
