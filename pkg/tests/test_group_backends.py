"""Internal-group backends: metric, epsilon, contraction identity, Jacobi."""
import itertools
from fractions import Fraction

import numpy as np
import pytest

from dirac_bergmann.gauge import deformed_algebra, jacobi_violation
from dirac_bergmann.group_backends import (BackendError, backend_by_name, euclidean_backend,
                                           generic_epsilon_backend, so21_backend)

R3 = range(3)


def test_so21_conventions():
    b = so21_backend()
    assert [b.eta[i, i] for i in R3] == [-1, 1, 1]
    assert b.eps_up[0, 1, 2] == 1
    # lowering all three indices picks up det(eta) = -1
    assert b.eps("___")[0, 1, 2] == -1
    assert b.identity_enabled and b.identity_sign == -1


def test_euclidean_identity_has_opposite_sign():
    b = euclidean_backend()
    assert not b.identity_enabled
    assert b.identity_sign == 1
    lhs, rhs = b.identity_holds_at(1, 2, 1, 2)
    assert lhs == -rhs != 0


@pytest.mark.parametrize("name", ["so21", "SO(2,1)", "so3", "euclidean"])
def test_lookup_by_name(name):
    assert backend_by_name(name).eps_up[0, 1, 2] == 1


def test_unknown_backend_name():
    with pytest.raises(BackendError):
        backend_by_name("su2-ish")


def test_contraction_identity_against_numpy():
    b = so21_backend()
    up = np.array(b.eps_up, dtype=float)
    lo = np.array(b.eps("___"), dtype=float)
    lhs = np.einsum("ijk,imn->jkmn", up, lo)
    d = np.eye(3)
    rhs = -(np.einsum("jm,kn->jkmn", d, d) - np.einsum("jn,km->jkmn", d, d))
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("backend", [so21_backend(), euclidean_backend()], ids=["so21", "so3"])
def test_structure_constants_satisfy_jacobi(backend):
    assert backend.jacobi_residual() == 0
    assert backend.invariant_metric()


def test_mixed_variance_epsilon_matches_manual_lowering():
    b = so21_backend()
    mixed = b.eps("^__")
    for i, j, k in itertools.product(R3, R3, R3):
        manual = sum(b.eps_up[i, m, n] * b.eta[m, j] * b.eta[n, k] for m in R3 for n in R3)
        assert mixed[i, j, k] == manual
    assert isinstance(mixed[0, 1, 2], Fraction)


def test_generic_backend_rejects_bad_data():
    eps = np.zeros((3, 3, 3), dtype=int)
    with pytest.raises(BackendError, match="zero"):
        generic_epsilon_backend(np.eye(3), eps)
    eps[0, 1, 2] = 1        # not antisymmetric
    with pytest.raises(BackendError, match="antisymmetric"):
        generic_epsilon_backend(np.eye(3), eps)
    with pytest.raises(BackendError, match="symmetric"):
        generic_epsilon_backend([[1, 1, 0], [0, 1, 0], [0, 0, 1]], so21_backend().eps_up)


def test_rescaled_epsilon_breaks_identity_but_keeps_jacobi():
    b = generic_epsilon_backend(np.diag([-1, 1, 1]), 2 * np.array(so21_backend().eps_up, dtype=object))
    assert b.identity_sign == -4
    assert not b.identity_enabled
    assert b.jacobi_residual() == 0


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1), Fraction(-3, 7)])
def test_deformed_poincare_algebra_is_a_lie_algebra(lam):
    assert jacobi_violation(deformed_algebra(so21_backend(), lam)) == []


def test_describe_is_serialisable():
    d = so21_backend().describe()
    assert d["contraction_identity"] is True
    assert d["eps_012_upper"] == "1" and d["eps_012_lower"] == "-1"
