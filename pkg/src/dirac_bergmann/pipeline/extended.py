"""Extended Hamiltonian and extended action built from the classified constraints."""
from __future__ import annotations

from dataclasses import dataclass

from ..phase_space import functional_derivative, local_bracket
from ..poly import Poly, is_divergence
from ..tensor.parser import parse_expr
from ..tensor.symbols import param_spec
from .constraints import Surface, weak_reduce
from .families import family_table, lower

# multipliers of the extended action
EXTENDED_PARAMS = (
    param_spec("z0e", "^i"),
    param_spec("z0A", "^i ^i", antisym=((0, 1),)),
    param_spec("ze", "^i"),
    param_spec("zA", "^i ^i", antisym=((0, 1),)),
    param_spec("lbe", "_s ^i"),
    param_spec("lbA", "_s ^i ^i", antisym=((1, 2),)),
)

PALATINI_CALH = "e[_0 ^I] gamI[_I] - A[_0 ^I ^J] gamIJ[_I _J]"
PALATINI_GAUGE_TERMS = ("z0e[^I] gam0I[_I] + z0A[^I ^J] gam0IJ[_I _J]"
                        " + ze[^I] gamI[_I] + zA[^I ^J] gamIJ[_I _J]")
PALATINI_SECOND_TERMS = "lbe[_a ^I] chiI[_I ^a] + lbA[_a ^I ^J] chiIJ[_I _J ^a]"
PALATINI_KINETIC = ("PA[^0 _I _J] d_0(A[_0 ^I ^J]) + PA[^a _I _J] d_0(A[_a ^I ^J])"
                    " + Pe[^0 _I] d_0(e[_0 ^I]) {s} Pe[^a _I] d_0(e[_a ^I])")


@dataclass
class ExtendedForms:
    table: object
    calH: Poly
    H_E: Poly
    S_E: Poly
    H_total: Poly    # H_E plus the second-class terms λ̄·χ that also appear in S_E


def extended_forms(theory, families, kinetic_sign: int = 1) -> ExtendedForms:
    """``𝓗``, ``H_E = 𝓗 + ζ·γ`` and ``S_E = kinetic - 𝓗 - ζ·γ - λ̄·χ`` as densities."""
    t = family_table(theory.table, families).with_params(*EXTENDED_PARAMS)

    def low(text):
        return lower(parse_expr(text, t), t, theory.backend, families)

    calh = low(PALATINI_CALH)
    gauge = low(PALATINI_GAUGE_TERMS)
    second = low(PALATINI_SECOND_TERMS)
    kin = low(PALATINI_KINETIC.format(s="+" if kinetic_sign > 0 else "-"))
    return ExtendedForms(t, calh, calh + gauge, kin - calh - gauge - second, calh + gauge + second)


def calH_matches_canonical(theory, families, hamiltonian) -> str:
    """Compare ``∫𝓗`` with the canonical Hamiltonian ``∫H_C``.

    ``"exact"`` if they differ by a divergence, ``"weak"`` if the difference
    (after dropping divergences) weak-reduces to zero, else ``"residual"``.
    """
    forms = extended_forms(theory, families)
    d = hamiltonian.canonical_poly - forms.calH
    if not d or is_divergence(d):
        return "exact"
    w = weak_reduce(d, families)
    if w.certified:
        return "weak"
    surf = Surface(theory.ps, [p for c in families for _, p in c.items()])
    return "weak" if not surf.reduce(d) else "residual"


def hamilton_consistency(theory, forms: ExtendedForms) -> dict:
    """For each canonical component, does ``δS_E/δp = 0`` reproduce ``q̇ = {q, H_E + λ̄·χ}``?

    Returns ``{(q, p): verdict}`` with verdict ``"consistent"`` or ``"sign flipped"``
    (or ``"residual"`` if neither holds).
    """
    out = {}
    for q, p, w in theory.ps.pairs:
        qdot = Poly.var((q[0], q[1], (0,)))
        flow = local_bracket(Poly.var((q[0], q[1], ())), forms.H_total, theory.ps)
        el = functional_derivative(forms.S_E, p).scale(w)
        if el == qdot - flow:
            out[(q, p)] = "consistent"
        elif el == -qdot - flow:
            out[(q, p)] = "sign flipped"
        else:
            out[(q, p)] = "residual"
    return out


__all__ = [
    "EXTENDED_PARAMS",
    "ExtendedForms",
    "PALATINI_CALH",
    "calH_matches_canonical",
    "extended_forms",
    "hamilton_consistency",
]
