"""Gauge generator from first-class constraints and the transformations it induces.

The generator has the Castellani form: every primary first-class family is
paired with the opaque time derivative ``D_0`` of a parameter, every
secondary with the parameter itself.  Variations are ``δX = {X, G}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .phase_space import local_bracket, param_signature
from .pipeline.constraints import Surface, independent_values
from .pipeline.families import family_table, lower
from .poly import Poly
from .tensor.components import to_poly
from .tensor.parser import parse_expr
from .tensor.symbols import COV_TIME, param_spec

# ε_0^I, ε^I, κ_0^{IJ}, κ^{IJ}; θ and Δ for the covariant form
PALATINI_PARAMS = (
    param_spec("ve0", "^i"),
    param_spec("ve", "^i"),
    param_spec("ka0", "^i ^i", antisym=((0, 1),)),
    param_spec("ka", "^i ^i", antisym=((0, 1),)),
    param_spec("Th", "^i"),
    param_spec("De", "^i ^i", antisym=((0, 1),)),
    param_spec("Th2", "^i"),
    param_spec("De2", "^i ^i", antisym=((0, 1),)),
    param_spec("xi", "^s"),
)

PALATINI_GENERATOR = ("D_0(ve0[^I]) gam0I[_I] + ve[^I] gamI[_I]"
                      " + D_0(ka0[^I ^J]) gam0IJ[_I _J] + ka[^I ^J] gamIJ[_I _J]")


@dataclass
class GaugeGenerator:
    text: str
    density: Poly
    table: object
    families: list = field(default_factory=list)


def castellani_generator(theory, families, text: str = PALATINI_GENERATOR, params=PALATINI_PARAMS) -> GaugeGenerator:
    """``G = ∫ text`` with family symbols replaced by their densities."""
    t = family_table(theory.table, families).with_params(*params)
    dens = lower(parse_expr(text, t), t, theory.backend, families)
    return GaugeGenerator(text, dens, t, list(families))


def variation(theory, gen: GaugeGenerator, target: str) -> dict:
    """``{comps: δX}`` for a field or momentum factor ``target`` such as ``e[_a ^I]``.

    Keys are value tuples for the free labels of ``target`` sorted by name.
    """
    x = parse_expr(target, gen.table)
    free = param_signature(x)
    out = {}
    for vals in independent_values(free, ()):
        p = to_poly(x, gen.table, theory.backend, dict(zip((s.label for s in free), vals)))
        out[vals] = local_bracket(p, gen.density, theory.ps) if p else Poly()
    return out


@dataclass
class VariationCheck:
    target: str
    expected: str
    verdict: str          # "exact" | "weak" | "residual"
    residual: dict = field(default_factory=dict)


def _expected(theory, table, expected: str, target: str, keys) -> dict:
    x = parse_expr(expected, table)
    labels = [s.label for s in param_signature(parse_expr(target, table))]
    return {k: to_poly(x, table, theory.backend, dict(zip(labels, k))) for k in keys}


def compare_variation(theory, gen: GaugeGenerator, target: str, expected: str,
                      surface: Surface | None = None, got: dict | None = None) -> VariationCheck:
    got = got if got is not None else variation(theory, gen, target)
    exp = _expected(theory, gen.table, expected, target, sorted(got))
    diff = {k: got[k] - exp[k] for k in got}
    if not any(diff.values()):
        return VariationCheck(target, expected, "exact")
    if surface is not None:
        red = {k: surface.reduce(d) for k, d in diff.items()}
        if not any(red.values()):
            return VariationCheck(target, expected, "weak")
        diff = red
    return VariationCheck(target, expected, "residual", {k: d for k, d in diff.items() if d})


def substitute_params(p: Poly, table, backend, rules: dict) -> Poly:
    """Replace parameter components using index-expression rules.

    ``rules`` maps a parameter name to ``(labels, value, d0_value)``, e.g.
    ``{"ve": (("I",), "Th[^I]", "d_0(Th[^I]) + A[_0 ^I _M] Th[^M]")}``.
    ``d0_value`` replaces the opaque ``D_0`` of the parameter.
    """
    cache: dict = {}

    def value(v):
        if v[0] not in rules:
            return None
        if v in cache:
            return cache[v]
        labels, text, d0 = rules[v[0]]
        derivs = list(v[2])
        if derivs.count(COV_TIME) > 1:
            raise ValueError("repeated D_0 on a parameter is not supported")
        use = text
        if COV_TIME in derivs:
            derivs.remove(COV_TIME)
            use = d0
        q = to_poly(parse_expr(use, table), table, backend, dict(zip(labels, v[1])))
        if derivs:
            q = q.derivative(tuple(derivs))
        cache[v] = q
        return q
    return p.substitute(value)


# ---------------------------------------------------------------------------
# covariant (Lagrangian) form of the transformations

COVARIANT_LAW = {
    "e": "D_mu(Th[^I]) - De[^I ^J] e[_mu _J]",
    "A": "D_mu(De[^I ^J]) + Lam Th[^I] e[_mu ^J] - Lam Th[^J] e[_mu ^I]",
}

# time-component readings of the opaque D_0 in the generator that give the covariant law
CHAIN_RULES = {
    "ve": (("I",), "Th[^I]", None),
    "ve0": (("I",), "Th[^I]", "d_0(Th[^I]) + A[_0 ^I _M] Th[^M] - De[^I ^M] e[_0 _M]"),
    "ka": (("I", "J"), "-De[^I ^J]", None),
    "ka0": (("I", "J"), "De[^I ^J]",
            "d_0(De[^I ^J]) + A[_0 ^I _M] De[^M ^J] + A[_0 ^J _M] De[^I ^M]"
            " + Lam Th[^I] e[_0 ^J] - Lam Th[^J] e[_0 ^I]"),
}

_LAW_LABELS = {"e": ("mu", "I"), "A": ("mu", "I", "J")}


def law_table(theory, params=PALATINI_PARAMS):
    return theory.table.with_params(*params)


def law_components(theory, table, field_name: str, text: str, rules: dict | None = None) -> dict:
    """``{comps: δ field}`` for a covariant law written with labels ``mu, I[, J]``."""
    x = parse_expr(text, table)
    labels = _LAW_LABELS[field_name]
    out = {}
    for vals in itertools.product(range(3), repeat=len(labels)):
        p = to_poly(x, table, theory.backend, dict(zip(labels, vals)))
        if rules:
            p = substitute_params(p, table, theory.backend, rules)
        out[vals] = p
    return out


def apply_variation(p: Poly, law: dict) -> Poly:
    """``δp`` for a polynomial in field jets, given ``{field: {comps: δ component}}``."""
    out = Poly()
    for v in p.variables():
        d = law.get(v[0], {}).get(v[1])
        if d:
            out = out + p.diff(v) * d.derivative(v[2])
    return out


def lagrangian_invariance(theory, law_text: dict = COVARIANT_LAW, rules: dict | None = None):
    """``(is_divergence(δL), δL)`` for the covariant law applied to the Lagrangian."""
    from .poly import is_divergence

    table = law_table(theory)
    law = {f: law_components(theory, table, f, t, rules) for f, t in law_text.items()}
    dl = apply_variation(to_poly(theory.lagrangian, table, theory.backend), law)
    return is_divergence(dl), dl


def compare_law(theory, field_name: str, law_text: str, expected: str, rules: dict | None = None,
                expected_rules: dict | None = None) -> str:
    """``"exact"`` or ``"residual"`` for two covariant expressions of the same field variation."""
    table = law_table(theory)
    got = law_components(theory, table, field_name, law_text, rules)
    exp = law_components(theory, table, field_name, expected, expected_rules)
    return "exact" if all(got[k] == exp[k] for k in got) else "residual"


def commutator(theory, law_text: dict, rules1: dict, rules2: dict) -> dict:
    """``[δ_1, δ_2]`` on each field component for two parameter sets (field independent)."""
    table = law_table(theory)
    l1 = {f: law_components(theory, table, f, t, rules1) for f, t in law_text.items()}
    l2 = {f: law_components(theory, table, f, t, rules2) for f, t in law_text.items()}
    return {f: {k: apply_variation(l2[f][k], l1) - apply_variation(l1[f][k], l2) for k in l1[f]}
            for f in law_text}


# [δ(Θ1, Δ1), δ(Θ2, Δ2)] = δ(Θ3, Δ3) with these composite parameters
COMPOSITION = {
    "Th": (("I",), "De[^I ^J] Th2[_J] - De2[^I ^J] Th[_J]", None),
    "De": (("I", "J"), "De[^I ^M] De2[_M ^J] - De2[^I ^M] De[_M ^J] - Lam (Th[^I] Th2[^J] - Th2[^I] Th[^J])", None),
}
SECOND_PARAMS = {"Th": (("I",), "Th2[^I]", None), "De": (("I", "J"), "De2[^I ^J]", None)}


def commutator_closes(theory, law_text: dict = COVARIANT_LAW, composition: dict = COMPOSITION) -> bool:
    """True iff two covariant transformations commute into the one with ``composition`` parameters."""
    c = commutator(theory, law_text, {}, SECOND_PARAMS)
    table = law_table(theory)
    law = {f: law_components(theory, table, f, t, composition) for f, t in law_text.items()}
    return all(c[f][k] == law[f][k] for f in c for k in c[f])


def deformed_algebra(backend, lam) -> tuple:
    """Structure constants of the Λ-deformed Poincaré algebra on ``(M^0..M^2, P^0..P^2)``.

    ``[M^I, M^K] = ε^{IKL} M_L``, ``[M^I, P^K] = ε^{IKL} P_L``,
    ``[P^I, P^K] = Λ ε^{IKL} M_L``.  Returns ``f[a][b] = {c: coeff}``.
    """
    from fractions import Fraction

    eps = backend.eps("^^_")   # ε^{IK}_L lowers the generator index
    f = [[{} for _ in range(6)] for _ in range(6)]
    for i in range(3):
        for k in range(3):
            for l in range(3):
                c = Fraction(eps[i, k, l])
                if not c:
                    continue
                f[i][k][l] = f[i][k].get(l, 0) + c
                f[i][3 + k][3 + l] = f[i][3 + k].get(3 + l, 0) + c
                f[3 + k][i][3 + l] = f[3 + k][i].get(3 + l, 0) - c
                f[3 + i][3 + k][l] = f[3 + i][3 + k].get(l, 0) + lam * c
    return f


def jacobi_violation(f) -> list:
    """Nonzero entries of ``[[X_a, X_b], X_c] + cyclic`` for structure constants ``f``."""
    n = len(f)
    bad = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                acc = {}
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    for d, k1 in f[x][y].items():
                        for e, k2 in f[d][z].items():
                            acc[e] = acc.get(e, 0) + k1 * k2
                nz = {e: v for e, v in acc.items() if v}
                if nz:
                    bad.append(((a, b, c), nz))
    return bad


__all__ = [
    "CHAIN_RULES",
    "COMPOSITION",
    "COVARIANT_LAW",
    "GaugeGenerator",
    "PALATINI_GENERATOR",
    "PALATINI_PARAMS",
    "VariationCheck",
    "apply_variation",
    "castellani_generator",
    "commutator",
    "commutator_closes",
    "compare_law",
    "deformed_algebra",
    "jacobi_violation",
    "lagrangian_invariance",
    "law_components",
    "law_table",
    "compare_variation",
    "substitute_params",
    "variation",
]
