"""Constraint families as symbols inside index expressions.

A family name such as ``gamI`` can appear in fixture expressions like
``eta[_I _K] gamI[_L]``.  Lowering registers each family as a symbol whose
slots are its free indices (sorted by label) and then replaces the
placeholder jet variables by the family's component densities.
"""
from __future__ import annotations

from ..poly import Poly
from ..tensor.components import to_poly
from ..tensor.symbols import INTERNAL, SPACETIME, SymbolSpec, SymbolTable

MACRO = "macro"


def family_spec(c) -> SymbolSpec:
    slots = tuple((INTERNAL if s.kind == INTERNAL else SPACETIME, s.variance) for s in c.free)
    return SymbolSpec(c.name, slots, antisym=tuple(tuple(g) for g in c.antisym), role=MACRO)


def family_table(table: SymbolTable, families) -> SymbolTable:
    t = table.copy()
    for c in families:
        if c.name not in t.symbols:
            t.register(family_spec(c))
    return t


def lower(x, table: SymbolTable, backend, families, bindings=None) -> Poly:
    """Component polynomial of ``x`` with family factors replaced by their densities."""
    fams = {c.name: c for c in families}
    p = to_poly(x, table, backend, bindings)

    def sub(v):
        c = fams.get(v[0])
        if c is None:
            return None
        dens = c.components.get(v[1])
        if dens is None:
            return Poly()
        return dens.derivative(v[2]) if v[2] else dens
    return p.substitute(sub)


__all__ = ["MACRO", "family_spec", "family_table", "lower"]
