"""Internal-group data: metric, invariant ε tensor and structure constants.

Only three-dimensional algebras are supported.  Components are exact
rationals; every backend is validated when it is constructed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

DIM = 3
R3 = range(DIM)


class BackendError(ValueError):
    pass


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3), dtype=object)
    eps[...] = Fraction(0)
    for p in itertools.permutations(range(3)):
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    sign = -sign
        eps[p] = Fraction(sign)
    return eps


def _frac_array(a, shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    flat = np.asarray(a, dtype=object).reshape(-1)
    for i, x in enumerate(flat):
        arr.flat[i] = Fraction(x)
    return arr


def _inverse(eta: np.ndarray) -> np.ndarray:
    import sympy

    m = sympy.Matrix(3, 3, lambda i, j: sympy.Rational(eta[i, j].numerator, eta[i, j].denominator))
    if m.det() == 0:
        raise BackendError("metric is degenerate")
    inv = m.inv()
    return _frac_array([[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in R3] for i in R3], (3, 3))


@dataclass(frozen=True, eq=False)
class GroupBackend:
    """Explicit three-dimensional internal-group data.

    ``eta`` is the metric with lower indices, ``eps_up`` the ε tensor with
    all indices upper.  ``identity_enabled`` is True iff the contraction
    identity ``ε^{IJK} ε_{IMN} = -(δ^J_M δ^K_N - δ^J_N δ^K_M)`` holds at
    every index tuple.
    """

    name: str
    eta: np.ndarray
    eps_up: np.ndarray
    eta_inv: np.ndarray = field(init=False)
    identity_enabled: bool = field(init=False)
    identity_sign: Fraction | None = field(init=False)

    def __post_init__(self):
        eta, eps = self.eta, self.eps_up
        object.__setattr__(self, "_eps_variants", {})
        for i, j in itertools.product(R3, R3):
            if eta[i, j] != eta[j, i]:
                raise BackendError("metric must be symmetric")
        for i, j, k in itertools.product(R3, R3, R3):
            if eps[i, j, k] != -eps[j, i, k] or eps[i, j, k] != -eps[i, k, j]:
                raise BackendError("ε must be totally antisymmetric")
        if all(eps[i, j, k] == 0 for i, j, k in itertools.product(R3, R3, R3)):
            raise BackendError("ε is identically zero (degenerate)")
        object.__setattr__(self, "eta_inv", _inverse(eta))
        sign = self._contraction_sign()
        object.__setattr__(self, "identity_sign", sign)
        object.__setattr__(self, "identity_enabled", sign == -1)

    # -- component access ----------------------------------------------
    def eps(self, variances: str) -> np.ndarray:
        """ε with the given variance pattern, e.g. ``"^__"``; lowered with η."""
        return _eps_cache(self, variances)

    def metric(self, variances: str) -> np.ndarray:
        if variances == "__":
            return self.eta
        if variances == "^^":
            return self.eta_inv
        return _frac_array(np.eye(3, dtype=int), (3, 3))

    def structure_constants(self) -> np.ndarray:
        """``f^I_{JK} = ε^{IMN} η_{MJ} η_{NK}``, indexed ``[I, J, K]``."""
        return self.eps("^__")

    # -- checks ---------------------------------------------------------
    def _contraction_sign(self) -> Fraction | None:
        """s such that ε^{IJK} ε_{IMN} = s (δδ - δδ) holds everywhere, else None."""
        up, lo = self.eps_up, self.eps("___")
        sign = None
        for j, k, m, n in itertools.product(R3, R3, R3, R3):
            lhs = sum(up[i, j, k] * lo[i, m, n] for i in R3)
            dd = int(j == m and k == n) - int(j == n and k == m)
            if dd == 0:
                if lhs != 0:
                    return None
                continue
            s = Fraction(lhs) / dd
            if sign is None:
                sign = s
            elif s != sign:
                return None
        return sign

    def identity_holds_at(self, j, k, m, n) -> tuple[Fraction, Fraction]:
        up, lo = self.eps_up, self.eps("___")
        lhs = sum(up[i, j, k] * lo[i, m, n] for i in R3)
        rhs = -(int(j == m and k == n) - int(j == n and k == m))
        return Fraction(lhs), Fraction(rhs)

    def jacobi_residual(self) -> Fraction:
        """Max |Jacobi violation| of the structure constants f^I_{JK}."""
        f = self.structure_constants()
        worst = Fraction(0)
        for a, b, c, d in itertools.product(R3, R3, R3, R3):
            s = Fraction(0)
            for e in R3:
                s += f[e, a, b] * f[d, e, c] + f[e, b, c] * f[d, e, a] + f[e, c, a] * f[d, e, b]
            worst = max(worst, abs(s))
        return worst

    def invariant_metric(self) -> bool:
        """True iff f_{IJK} = η_{IL} f^L_{JK} is totally antisymmetric."""
        f = self.eps("___")
        return all(f[i, j, k] == -f[j, i, k] for i, j, k in itertools.product(R3, R3, R3))

    def describe(self) -> dict:
        return {
            "name": self.name,
            "eta": [[str(self.eta[i, j]) for j in R3] for i in R3],
            "eps_012_upper": str(self.eps_up[0, 1, 2]),
            "eps_012_lower": str(self.eps("___")[0, 1, 2]),
            "contraction_identity": self.identity_enabled,
        }


def _eps_cache(b: GroupBackend, variances: str) -> np.ndarray:
    cache = b._eps_variants
    if variances in cache:
        return cache[variances]
    if len(variances) != 3 or set(variances) - {"^", "_"}:
        raise ValueError(f"bad variance pattern {variances!r}")
    out = b.eps_up.copy()
    for axis, v in enumerate(variances):
        if v == "_":
            out = np.moveaxis(np.tensordot(b.eta, out, axes=([1], [axis])), 0, axis)
    out = _frac_array(out, (3, 3, 3))
    cache[variances] = out
    return out


def so21_backend() -> GroupBackend:
    """SO(2,1): η = diag(-1, 1, 1), ε^{012} = +1."""
    return GroupBackend("SO(2,1)", _frac_array(np.diag([-1, 1, 1]), (3, 3)), _levi_civita())


def generic_epsilon_backend(eta, eps, name: str = "generic") -> GroupBackend:
    """Backend from explicit metric (3x3) and upper ε (3x3x3) components."""
    eta_a = _frac_array(eta, (3, 3))
    eps_a = _frac_array(eps, (3, 3, 3))
    return GroupBackend(name, eta_a, eps_a)


def euclidean_backend() -> GroupBackend:
    """SO(3): η = diag(1, 1, 1), ε^{012} = +1; the SO(2,1) identity fails in sign."""
    return generic_epsilon_backend(np.eye(3, dtype=int), _levi_civita(), name="SO(3)")


def backend_by_name(name: str) -> GroupBackend:
    key = name.strip().lower().replace("(", "").replace(")", "").replace(",", "").replace("-", "")
    if key in {"so21", "so21backend"}:
        return so21_backend()
    if key in {"so3", "euclidean"}:
        return euclidean_backend()
    raise BackendError(f"unknown backend {name!r}")


def adjoint_theory(backend: GroupBackend, lam_mode: str = "symbolic"):
    """Adjoint-representation theory fixture for ``backend`` (see :mod:`theories`)."""
    from .theories import adjoint_theory as _build

    return _build(backend, lam_mode=lam_mode)
