"""Canonical pairs, functional derivatives and brackets."""
from fractions import Fraction

import pytest

from dirac_bergmann.phase_space import (FieldSpec, PhaseSpaceError, PhaseSpaceRegistry, SmearedFunctional,
                                        abstract_functional_derivative, functional_derivative,
                                        integrals_equal, local_bracket, poisson_bracket, smear)
from dirac_bergmann.poly import Poly, euler
from dirac_bergmann.tensor.components import to_poly
from dirac_bergmann.tensor.parser import parse_expr
from dirac_bergmann.theories import palatini_theory, particle_theory

TH = palatini_theory()
PS = TH.ps


def v(name, comps=(), derivs=()):
    return Poly.var((name, tuple(comps), tuple(derivs)))


def test_registry_pairs_and_counts():
    assert len(PS.pairs) == 18
    weights = {q[0]: w for q, _, w in PS.pairs}
    assert weights == {"e": 1, "A": Fraction(1, 2)}
    assert PS.count() == 36
    assert PS.count(spacetime_only=True) == 12
    assert particle_theory().ps.count(spacetime_only=True) == 2


def test_registry_rejects_wrong_projector_and_non_momentum():
    with pytest.raises(PhaseSpaceError, match="projector"):
        PhaseSpaceRegistry(TH.table, TH.backend, (FieldSpec("A", "PA"),))
    with pytest.raises(PhaseSpaceError, match="momentum"):
        PhaseSpaceRegistry(TH.table, TH.backend, (FieldSpec("e", "A"),))


def test_fundamental_brackets():
    s1, s2 = v("s1"), v("s2")
    assert poisson_bracket(v("e", (1, 2)) * s1, v("Pe", (1, 2)) * s2, PS) == s1 * s2
    assert poisson_bracket(v("Pe", (1, 2)) * s2, v("e", (1, 2)) * s1, PS) == -(s1 * s2)
    # antisymmetric pair: delta^{[I}_K delta^{J]}_L
    assert poisson_bracket(v("A", (1, 0, 1)) * s1, v("PA", (1, 0, 1)) * s2, PS) == (s1 * s2).scale(Fraction(1, 2))
    assert not poisson_bracket(v("e", (1, 2)) * s1, v("Pe", (2, 1)) * s2, PS)


def test_bracket_with_derivatives_moves_onto_smearing():
    s1, s2 = v("s1"), v("s2")
    got = poisson_bracket(v("e", (1, 2), (1,)) * s1, v("Pe", (1, 2)) * s2, PS)
    assert integrals_equal(got, -(v("s1", (), (1,)) * s2), params=("s1",))


def test_velocities_are_rejected():
    with pytest.raises(PhaseSpaceError):
        poisson_bracket(v("e", (1, 2), (0,)), v("Pe", (1, 2)), PS)


def test_functional_derivative_is_euler_operator():
    p = v("e", (1, 2)) * v("e", (1, 2), (2,)) * v("Pe", (0, 1))
    assert functional_derivative(p, ("e", (1, 2)), PS) == euler(p, ("e", (1, 2)), dims=(0, 1, 2))
    with pytest.raises(PhaseSpaceError):
        functional_derivative(p, ("nosuch", ()), PS)


def test_local_bracket_of_field_with_momentum_functional():
    g = SmearedFunctional("G", v("Pe", (2, 1)) * v("s1"))
    assert local_bracket(v("e", (2, 1)), g, PS) == v("s1")


def test_smear_builds_dual_parameter():
    x = parse_expr("D_a(PA[^a _I _J])", TH.table)
    F, table = smear(x, "s1", TH.table, TH.backend)
    assert F.params == ("s1",)
    spec = table.get("s1")
    assert spec.antisym == ((0, 1),)
    assert all(var[0] in {"s1", "PA", "A"} for var in F.density.variables())


def test_abstract_momentum_of_connection():
    got = abstract_functional_derivative(TH.lagrangian, "d_0(A[_a ^I ^J])", TH.table)
    assert got == parse_expr("eps0[^a ^b] epsI[_I _J _K] e[_b ^K]", TH.table)
    assert abstract_functional_derivative(TH.lagrangian, "d_0(e[_a ^I])", TH.table).terms == ()


def test_abstract_derivative_matches_component_euler():
    # the component Euler derivative of the Lagrangian w.r.t. a connection velocity
    lag = to_poly(TH.lagrangian, TH.table, TH.backend)
    comp = lag.diff(("A", (1, 0, 1), (0,)))
    abstract = abstract_functional_derivative(TH.lagrangian, "d_0(A[_a ^I ^J])", TH.table)
    # the density pairs with dA_1^{01} and dA_1^{10}: two slots for one independent component
    want = to_poly(abstract, TH.table, TH.backend, {"a": 1, "I": 0, "J": 1}).scale(2)
    assert comp == want
