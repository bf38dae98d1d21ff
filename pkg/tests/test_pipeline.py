"""Dirac-Bergmann stages: momenta, consistency, matrix, classification, Dirac bracket."""
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dirac_bergmann.phase_space import SmearedFunctional, integrals_equal, poisson_bracket
from dirac_bergmann.pipeline.classify import count_dof, dof_formula
from dirac_bergmann.pipeline.constraints import weak_reduce
from dirac_bergmann.pipeline.dirac import dirac_bracket
from dirac_bergmann.pipeline.linalg import inverse, nullspace, rank
from dirac_bergmann.pipeline.momenta import PipelineError, build_hamiltonians, derive_momenta_and_primaries
from dirac_bergmann.poly import Poly, is_divergence
from dirac_bergmann.report import load_config
from dirac_bergmann.report.analysis import _State
from dirac_bergmann.theories import particle_theory

from strategies import jet_poly


@pytest.fixture(scope="module")
def state():
    cfg = load_config("palatini-so21")
    return _State(cfg.build_theory(), cfg)


# -- a regular system -------------------------------------------------------

def test_particle_has_no_constraints():
    th = particle_theory()
    prim = derive_momenta_and_primaries(th)
    assert prim.primaries == [] and prim.hessian_rank == 1
    ham = build_hamiltonians(th, prim)
    assert ham.canonical_poly == Poly.var(("p", (), ())) ** 2 * Fraction(1, 2)
    dof = count_dof(None, th.ps)
    assert (dof.canonical, dof.dof) == (2, 1)


def test_dof_formula():
    assert dof_formula(12, 4, 4) == (0, 0)
    assert dof_formula(2, 0, 0) == (2, 1)
    with pytest.raises(PipelineError):
        dof_formula(4, 3, 0)


# -- exact linear algebra against sympy ------------------------------------

small = st.integers(-3, 3)


@settings(max_examples=1000, deadline=None, suppress_health_check=list(HealthCheck))
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=5)))
def test_rank_and_nullspace_match_sympy(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    assert rank(m) == sympy.Matrix(rows).rank()
    for vec in nullspace(m, len(rows[0])):
        assert all(sum(a * b for a, b in zip(r, vec)) == 0 for r in m)


def test_inverse_of_antisymmetric_block():
    C = [[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, Fraction(1, 3)], [0, 0, Fraction(-1, 3), 0]]
    Ci = inverse(C)
    exact = lambda m: sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in m])
    assert exact(Ci) == exact(C).inv()


# -- Palatini run --------------------------------------------------------

def test_primary_structure(state):
    prim = state.get("primaries")
    assert prim.hessian_rank == 0 and prim.hessian_constant
    assert prim.spacetime_count == 6
    assert prim.full_count == 18


def test_consistency_reaches_fixed_point(state):
    res = state.get("consistency")
    assert res.fixed_point
    assert sorted(c.name for c in res.secondaries) == ["psiI", "psiIJ"]


def test_constraint_components_weakly_vanish(state):
    cons = state.get("consistency").constraints
    for c in cons:
        for _, p in c.items():
            assert weak_reduce(p * Poly.var(("e", (1, 0), ())), cons).certified


def test_ranks_and_classification(state):
    assert (state.get("rank_primary").spacetime_rank, state.get("rank_primary").spacetime_null) == (4, 2)
    assert (state.get("rank_full").spacetime_rank, state.get("rank_full").spacetime_null) == (4, 4)
    cl = state.get("classification")
    assert len(cl.first_class) == 4 and len(cl.second_class) == 2
    dof = state.get("dof")
    assert (dof.canonical, dof.first_class, dof.second_class, dof.dof) == (12, 4, 4, 0)
    assert (dof.full_canonical, dof.full_dof) == (36, 0)


def test_second_class_matrix_is_invertible_and_antisymmetric(state):
    C = state.get("classification").block.C
    n = len(C)
    assert all(C[i][j] == -C[j][i] for i in range(n) for j in range(n))
    assert rank(C) == n


@settings(max_examples=200, deadline=None, suppress_health_check=list(HealthCheck))
@given(jet_poly(param="s2"), st.data())
def test_second_class_constraints_are_dirac_central(state, f, data):
    block = state.get("classification").block
    i = data.draw(st.integers(0, len(block.polys) - 1))
    chi = SmearedFunctional("chi", block.polys[i] * Poly.var(("s1", (), ())))
    assert integrals_equal(dirac_bracket(chi, f, state.theory.ps, block), Poly(), params=("s1", "s2"))


@settings(max_examples=200, deadline=None, suppress_health_check=list(HealthCheck))
@given(jet_poly(param="s1"), jet_poly(param="s2"))
def test_dirac_bracket_is_antisymmetric(state, f, g):
    block = state.get("classification").block
    ps = state.theory.ps
    assert is_divergence(dirac_bracket(f, g, ps, block) + dirac_bracket(g, f, ps, block))


def test_dirac_bracket_reduces_to_poisson_away_from_second_class(state):
    # time components commute with every second-class constraint
    block = state.get("classification").block
    ps = state.theory.ps
    f = Poly.var(("Pe", (0, 1), ())) * Poly.var(("e", (0, 2), ())) * Poly.var(("s1", (), ()))
    g = Poly.var(("e", (0, 1), ())) * Poly.var(("s2", (), ()))
    assert dirac_bracket(f, g, ps, block) == poisson_bracket(f, g, ps) != Poly()
