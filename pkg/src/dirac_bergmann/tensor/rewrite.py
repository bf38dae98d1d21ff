"""Pattern rewriting on indexed expressions.

Three operations used when lifting component results back to index
notation: replacing a sub-product by a symbol (e.g. a momentum expression
by the momentum), integrating spatial derivatives by parts, and expanding
named constraint families used as macros inside fixture expressions.
"""
from __future__ import annotations

import itertools
from dataclasses import replace
from fractions import Fraction

from .expr import (
    Deriv,
    Expr,
    ExprError,
    IndexSlot,
    TensorFactor,
    Term,
    canonicalize,
    fresh_label,
    multiply_terms,
    partial,
    relabel,
)
from .symbols import NUMERIC, SPATIAL, TIME, SymbolSpec, SymbolTable


def _perm_sign(perm) -> int:
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def _slot_orders(f: TensorFactor, spec: SymbolSpec | None):
    """All slot orderings of ``f`` allowed by its (anti)symmetry, with signs."""
    groups = []
    if spec is not None:
        groups = [(g, -1) for g in spec.antisym] + [(g, 1) for g in spec.sym]
    choices = []
    for g, parity in groups:
        opts = []
        for perm in itertools.permutations(range(len(g))):
            sign = _perm_sign(perm) if parity == -1 else 1
            opts.append((g, perm, sign))
        choices.append(opts)
    for combo in itertools.product(*choices):
        slots = list(f.slots)
        sign = 1
        for g, perm, s in combo:
            for k, pos in enumerate(g):
                slots[pos] = f.slots[g[perm[k]]]
            sign *= s
        yield sign, tuple(slots)


def _match_slots(pslots, tslots, mapping: dict) -> dict | None:
    m = dict(mapping)
    for p, t in zip(pslots, tslots):
        if p.variance != t.variance:
            return None
        if p.concrete or t.concrete:
            if p.label != t.label:
                return None
            continue
        if p.kind != t.kind and not (p.kind == "spacetime"):
            return None
        if p.label in m:
            if m[p.label] != t.label:
                return None
        else:
            if t.label in m.values():
                return None
            m[p.label] = t.label
    return m


def match_term(pattern: Term, t: Term, table: SymbolTable):
    """Yield ``(used factor indices, label map, sign, derivs)`` for embeddings of ``pattern`` in ``t``.

    ``derivs`` are derivative operators carried by the single non-numeric
    factor of the match (Leibniz makes this the derivative of the whole
    pattern because numeric tensors are constant).
    """
    pf = pattern.factors
    nonnum = [i for i, f in enumerate(pf) if table.get(f.symbol).role != NUMERIC]

    def rec(k, used, mapping, sign, derivs):
        if k == len(pf):
            yield tuple(used), mapping, sign, derivs
            return
        p = pf[k]
        for j, f in enumerate(t.factors):
            if j in used or f.symbol != p.symbol:
                continue
            if f.derivs and not (len(nonnum) == 1 and k == nonnum[0] and not p.derivs):
                continue
            if p.derivs and f.derivs != p.derivs:
                continue
            for s, slots in _slot_orders(f, table.symbols.get(f.symbol)):
                m = _match_slots(p.slots, slots, mapping)
                if m is None:
                    continue
                yield from rec(k + 1, used + [j], m, sign * s, derivs if p.derivs else derivs + f.derivs)

    yield from rec(0, [], {}, 1, ())


def replace_pattern(x: Expr, pattern: Expr, replacement: Expr, table: SymbolTable, max_rounds: int = 8) -> Expr:
    """Replace every occurrence of the single-term ``pattern`` by ``replacement``.

    ``replacement`` must have the same free indices as ``pattern``.
    """
    if len(pattern.terms) != 1:
        raise ExprError("pattern must be a single term")
    (pt,) = pattern.terms
    pfree = pattern.free_indices()
    rfree = replacement.free_indices()
    if {(s.label, s.variance) for s in pfree} != {(s.label, s.variance) for s in rfree}:
        raise ExprError("pattern and replacement have different free indices")
    cur = x
    for _ in range(max_rounds):
        changed = False
        out = []
        for t in cur.terms:
            hit = next(iter(match_term(pt, t, table)), None)
            if hit is None:
                out.append(t)
                continue
            used, mapping, sign, derivs = hit
            changed = True
            rest = Term(t.coeff * sign / pt.coeff, t.lam - pt.lam, tuple(f for j, f in enumerate(t.factors)
                                                                         if j not in used))
            avoid = set(t.label_census())
            for rt in replacement.terms:
                # fresh dummies for the replacement, free labels mapped
                m = {}
                for lab, kind in rt.dummies().items():
                    m[lab] = fresh_label(kind, avoid)
                    avoid.add(m[lab])
                for s in rfree:
                    m[s.label] = mapping[s.label]
                r = relabel(rt, m)
                if derivs:
                    (i,) = [k for k, f in enumerate(r.factors) if table.get(f.symbol).role != NUMERIC]
                    f = r.factors[i]
                    r = Term(r.coeff, r.lam, r.factors[:i] + (TensorFactor(f.symbol, f.slots, f.derivs + derivs),)
                             + r.factors[i + 1:])
                out.append(multiply_terms(rest, r))
        cur = Expr(tuple(out))
        if not changed:
            break
    return canonicalize(cur, table)


def integrate_by_parts(x: Expr, frozen, table: SymbolTable, max_rounds: int = 8) -> Expr:
    """Move spatial derivatives off factors selected by ``frozen(factor)``.

    Each term must be an internal scalar, so ``∂(XY) = D(X)Y + X D(Y)`` holds
    with the covariant derivative and numeric tensors are covariantly
    constant; boundary terms are dropped.
    """
    cur = x
    for _ in range(max_rounds):
        changed = False
        out = Expr()
        for t in cur.terms:
            idx = next((i for i, f in enumerate(t.factors)
                        if frozen(f) and f.derivs and f.derivs[-1].slot.kind in (SPATIAL,)), None)
            if idx is None:
                out = out + Expr((t,))
                continue
            changed = True
            f = t.factors[idx]
            d = f.derivs[-1]
            inner = TensorFactor(f.symbol, f.slots, f.derivs[:-1])
            rest = Expr((Term(t.coeff, t.lam, t.factors[:idx] + t.factors[idx + 1:]),))
            moved = partial(rest, d.slot, table, op=d.op)
            out = out - moved * Expr.factor(inner)
        cur = out
        if not changed:
            break
    return canonicalize(cur, table)


class MacroTable:
    """Named tensor expressions usable as symbols inside other expressions.

    A macro's slots are its free indices sorted by label (internal labels sort
    before spatial ones), so ``chiIJ[_I _L ^a]`` names the ``(I, L, a)``
    component family.
    """

    def __init__(self, table: SymbolTable):
        self.table = table.copy()
        self.defs: dict = {}

    def define(self, name: str, x: Expr, antisym=()):
        free = sorted(x.free_indices(), key=lambda s: s.label)
        slots = tuple(("internal" if s.kind == "internal" else "spacetime", s.variance) for s in free)
        self.table.register(SymbolSpec(name, slots, antisym=tuple(tuple(g) for g in antisym), role="macro"))
        self.defs[name] = (x, tuple(free))

    def expand(self, x: Expr) -> Expr:
        out = Expr()
        for t in x.terms:
            acc = Expr((Term(t.coeff, t.lam, ()),))
            for f in t.factors:
                if f.symbol in self.defs:
                    body, free = self.defs[f.symbol]
                    mapping = {}
                    for s, u in zip(free, f.slots):
                        if s.variance != u.variance:
                            raise ExprError(f"{f.symbol}: slot {u.label} has the wrong variance")
                        mapping[s.label] = u.label
                    piece = Expr()
                    for bt in body.terms:
                        avoid = set(bt.label_census()) | {u.label for u in f.slots}
                        m = dict(mapping)
                        for lab, kind in bt.dummies().items():
                            m[lab] = fresh_label(kind, avoid)
                            avoid.add(m[lab])
                        piece = piece + Expr((relabel(bt, m),))
                    for d in f.derivs:
                        piece = partial(piece, d.slot, self.table, op=d.op)
                    acc = acc * piece
                else:
                    acc = acc * Expr.factor(f)
            out = out + acc
        return canonicalize(out, self.table)


__all__ = ["MacroTable", "integrate_by_parts", "match_term", "replace_pattern"]
