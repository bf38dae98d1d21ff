"""Bracket identities between constraint families.

An identity ``{L(x), R(y)} = rhs δ(x-y)`` is checked by smearing both
families, lowering ``rhs`` (which may mention family symbols) to a density
and comparing.  The difference is first put in normal form; a nonzero
normal form is then weak-reduced against the family components.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..phase_space import normal_form, poisson_bracket
from ..poly import Poly
from ..tensor.parser import parse_expr
from .constraints import weak_reduce
from .families import family_table, lower


@dataclass
class IdentityCheck:
    left: str
    right: str
    rhs: str
    verdict: str              # "exact" | "weak" | "residual"
    difference: Poly = field(default_factory=Poly)   # normal form of bracket - rhs
    residual: Poly = field(default_factory=Poly)     # what weak reduction could not absorb

    @property
    def holds(self) -> bool:
        return self.verdict != "residual"


def _dual(slots) -> str:
    return " ".join(("_" if s.variance == "^" else "^") + s.label for s in slots)


def smeared_rhs(rhs: str, lf, rf) -> str:
    """Wrap ``rhs`` as ``s1[..] s2[..] (rhs)`` unless it already names the parameters."""
    if "s1" in rhs:
        return rhs
    return f"s1[{_dual(lf.slots)}] s2[{_dual(rf.slots)}] ({rhs})"


def bracket_identity(theory, families, left: str, right: str, rhs: str, weak_against=None,
                     bracket=None) -> IdentityCheck:
    """Check ``{left(x), right(y)} = rhs δ(x-y)``.

    ``left``/``right`` are single family factors such as ``gamI[_I]``; their
    labels are the free indices of ``rhs``.  ``weak_against`` lists the
    families used for weak reduction (default: ``families``).  ``bracket``
    overrides the Poisson bracket, e.g. with a Dirac bracket.
    """
    fams = list(families)
    by_name = {c.name: c for c in fams}
    table = family_table(theory.table, fams)
    lf = parse_expr(left, table).terms[0].factors[0]
    rf = parse_expr(right, table).terms[0].factors[0]
    a, b = by_name[lf.symbol], by_name[rf.symbol]
    t2 = table.with_params(a.param_spec("s1"), b.param_spec("s2"))
    expected = lower(parse_expr(smeared_rhs(rhs, lf, rf), t2), t2, theory.backend, fams)
    br = (bracket or (lambda f, g: poisson_bracket(f, g, theory.ps)))(a.smeared("s1"), b.smeared("s2"))
    d = normal_form(br - expected, "s1")
    if not d:
        return IdentityCheck(left, right, rhs, "exact")
    w = weak_reduce(d, weak_against if weak_against is not None else fams)
    return IdentityCheck(left, right, rhs, "weak" if w.certified else "residual", d, w.residual)


def closure_suite(theory, families, cases, **kw) -> list[IdentityCheck]:
    """Run ``bracket_identity`` for each ``(left, right, rhs)`` case."""
    return [bracket_identity(theory, families, *c, **kw) for c in cases]


__all__ = ["IdentityCheck", "bracket_identity", "closure_suite", "smeared_rhs"]
