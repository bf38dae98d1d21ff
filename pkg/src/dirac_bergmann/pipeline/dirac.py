"""Dirac brackets for a constant, ultralocal second-class block."""
from __future__ import annotations

from dataclasses import dataclass

from ..phase_space import normal_form, param_signature, poisson_bracket, smear
from ..poly import Poly, euler
from ..tensor.components import to_poly
from ..tensor.parser import parse_expr
from .classify import SecondClassBlock

# {F, G}_D = {F, G} + SIGN * {F, χ_α} C^{αβ} {χ_β, G}, C^{αβ} the inverse of C_{αβ} = {χ_α, χ_β}
SIGN = -1


def _generator(block: SecondClassBlock) -> Poly:
    g = Poly()
    for i, q in enumerate(block.polys):
        g = g + Poly.var(("t", (i,), ())) * q
    return g


def dirac_bracket(F, G, ps, block: SecondClassBlock, sign: int = SIGN) -> Poly:
    """Dirac bracket density of two smeared functionals.

    The correction ``Σ {F, χ_α}(z) C^{αβ} {χ_β, G}(z)`` is a single local
    density because ``C^{-1}`` has no derivatives.
    """
    pb = poisson_bracket(F, G, ps)
    g = _generator(block)
    left = poisson_bracket(F, g, ps)
    right = poisson_bracket(g, G, ps)
    n = len(block.polys)
    u = [euler(left, ("t", (i,))) for i in range(n)]
    v = [euler(right, ("t", (i,))) for i in range(n)]
    corr = Poly()
    for i in range(n):
        if not u[i]:
            continue
        for j in range(n):
            c = block.Cinv[i][j]
            if c and v[j]:
                corr = corr + (u[i] * v[j]).scale(c)
    return pb + corr.scale(sign)


def dirac_bracket_fn(ps, block: SecondClassBlock, sign: int = SIGN):
    """``bracket(F, G)`` callable for :func:`closure.bracket_identity`."""
    return lambda F, G: dirac_bracket(F, G, ps, block, sign)


@dataclass
class FieldBracket:
    left: str
    right: str
    rhs: str
    verdict: str          # "exact" | "residual"
    difference: Poly


def field_bracket(theory, block: SecondClassBlock, left: str, right: str, rhs: str,
                  sign: int = SIGN) -> FieldBracket:
    """Check ``{left(x), right(y)}_D = rhs δ(x-y)`` for single canonical fields.

    ``left`` and ``right`` are factors like ``e[_a ^I]``; ``rhs`` uses their labels.
    """
    table, be = theory.table, theory.backend
    lx, rx = theory.parse(left), theory.parse(right)
    F, t1 = smear(lx, "s1", table, be)
    G, t2 = smear(rx, "s2", t1, be)
    dual = lambda x: " ".join(("_" if s.variance == "^" else "^") + s.label for s in param_signature(x))
    exp = to_poly(parse_expr(f"s1[{dual(lx)}] s2[{dual(rx)}] ({rhs})", t2), t2, be)
    d = normal_form(dirac_bracket(F, G, theory.ps, block, sign) - exp, "s1")
    return FieldBracket(left, right, rhs, "exact" if not d else "residual", d)


__all__ = ["SIGN", "FieldBracket", "dirac_bracket", "dirac_bracket_fn", "field_bracket"]
