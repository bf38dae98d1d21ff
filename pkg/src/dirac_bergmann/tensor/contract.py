"""Value-preserving rewrite rules: δ/η absorption and the ε-ε contraction identity."""
from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from typing import NamedTuple

from .expr import Expr, IndexSlot, TensorFactor, Term, canonicalize, relabel
from .symbols import DIMENSIONS, DOWN, UP, SymbolTable

METRIC_SYMBOLS = ("eta",)


class ContractionResult(NamedTuple):
    expr: Expr
    suppressed: bool
    note: str = ""


def _is_plain(f: TensorFactor, name: str) -> bool:
    return f.symbol == name and not f.derivs


def _other_occurrence(t: Term, skip: int, label: str):
    """(factor index, slot position, is_deriv) of ``label`` outside factor ``skip``."""
    for i, f in enumerate(t.factors):
        if i == skip:
            continue
        for p, s in enumerate(f.slots):
            if s.label == label:
                return i, p, False
        for p, d in enumerate(f.derivs):
            if d.slot.label == label:
                return i, p, True
    return None


def _rename_slot(f: TensorFactor, pos: int, is_deriv: bool, new: IndexSlot) -> TensorFactor:
    if is_deriv:
        ds = list(f.derivs)
        ds[pos] = replace(ds[pos], slot=new)
        return TensorFactor(f.symbol, f.slots, tuple(ds))
    ss = list(f.slots)
    ss[pos] = new
    return TensorFactor(f.symbol, tuple(ss), f.derivs)


def _delta(up: IndexSlot, down: IndexSlot) -> TensorFactor:
    return TensorFactor("delta", (replace(up, variance=UP), replace(down, variance=DOWN)))


def _absorb_once(t: Term, backend) -> list[Term] | None:
    """One δ/η step on ``t``; returns replacement terms or None if nothing applies."""
    fs = list(t.factors)
    for i, f in enumerate(fs):
        if _is_plain(f, "eta") and f.slots[0].variance != f.slots[1].variance:
            up, down = (f.slots[0], f.slots[1]) if f.slots[0].variance == UP else (f.slots[1], f.slots[0])
            fs2 = fs[:i] + [_delta(up, down)] + fs[i + 1:]
            return [Term(t.coeff, t.lam, tuple(fs2))]
        if _is_plain(f, "delta"):
            u, d = f.slots
            rest = fs[:i] + fs[i + 1:]
            if u.concrete and d.concrete:
                if u.label != d.label:
                    return []
                return [Term(t.coeff, t.lam, tuple(rest))]
            if u.label == d.label:
                return [Term(t.coeff * DIMENSIONS[u.kind], t.lam, tuple(rest))]
            for keep, gone in ((u, d), (d, u)):
                if gone.concrete:
                    continue
                hit = _other_occurrence(t, i, gone.label)
                if hit is None:
                    continue
                j, p, isd = hit
                tgt = fs[j].derivs[p].slot if isd else fs[j].slots[p]
                new = replace(tgt, label=keep.label, kind=keep.kind)
                fs2 = list(fs)
                fs2[j] = _rename_slot(fs[j], p, isd, new)
                del fs2[i]
                return [Term(t.coeff, t.lam, tuple(fs2))]
        if _is_plain(f, "eta") and f.slots[0].variance == f.slots[1].variance:
            for q, s in enumerate(f.slots):
                if s.concrete:
                    continue
                hit = _other_occurrence(t, i, s.label)
                if hit is None:
                    continue
                j, p, isd = hit
                g = fs[j]
                if isd:
                    continue
                other = f.slots[1 - q]
                if _is_plain(g, "eta"):
                    # η_{IJ} η^{JK} -> δ_I^K
                    g_other = g.slots[1 - p]
                    if g_other.variance == other.variance:
                        continue
                    up, down = (other, g_other) if other.variance == UP else (g_other, other)
                    fs2 = [x for k, x in enumerate(fs) if k not in (i, j)] + [_delta(up, down)]
                    return [Term(t.coeff, t.lam, tuple(fs2))]
                if g.symbol == "delta":
                    continue
                # raise/lower the slot of g via η
                new = replace(g.slots[p], label=other.label, variance=other.variance, kind=other.kind)
                fs2 = list(fs)
                fs2[j] = _rename_slot(g, p, False, new)
                del fs2[i]
                return [Term(t.coeff, t.lam, tuple(fs2))]
    return None


def contract_deltas_etas(x: Expr, backend=None, table: SymbolTable | None = None) -> Expr:
    """Absorb Kronecker deltas, take traces, merge η pairs and raise/lower with η."""
    out = []
    work = list(x.terms)
    while work:
        t = work.pop()
        r = _absorb_once(t, backend)
        if r is None:
            out.append(t)
        else:
            work.extend(r)
    return canonicalize(Expr(tuple(out)), table)


def _pair_metric(a: IndexSlot, b: IndexSlot) -> TensorFactor:
    """δ or η joining slot ``a`` of one ε with slot ``b`` of the other."""
    if a.variance != b.variance:
        up, down = (a, b) if a.variance == UP else (b, a)
        return _delta(up, down)
    return TensorFactor("eta", (a, b))


def _rotate_to_front(f: TensorFactor, pos: int) -> TensorFactor:
    s = f.slots
    if len(s) == 3:
        rot = s[pos:] + s[:pos]
        return TensorFactor(f.symbol, rot, f.derivs)
    if pos == 0:
        return f
    return None  # caller handles two-slot sign


def _epsilon_pair(t: Term, sign_internal: Fraction):
    """Rewrite one contracted ε pair in ``t``; returns new terms or None."""
    fs = list(t.factors)
    for i, f in enumerate(fs):
        if f.symbol not in ("epsI", "eps0") or f.derivs:
            continue
        for j in range(i + 1, len(fs)):
            g = fs[j]
            if g.symbol != f.symbol or g.derivs:
                continue
            shared = [(p, q) for p, s in enumerate(f.slots) for q, r in enumerate(g.slots)
                      if s.label == r.label and not s.concrete]
            if not shared:
                continue
            p, q = shared[0]
            coeff = t.coeff
            if f.symbol == "epsI":
                f2, g2 = _rotate_to_front(f, p), _rotate_to_front(g, q)
                _, jj, kk = f2.slots
                _, mm, nn = g2.slots
                s = sign_internal
                pieces = [
                    (s, [_pair_metric(jj, mm), _pair_metric(kk, nn)]),
                    (-s, [_pair_metric(jj, nn), _pair_metric(kk, mm)]),
                ]
            else:
                # two-dimensional density: ε^{ab} ε_{ac} = δ^b_c
                a_other = f.slots[1 - p]
                b_other = g.slots[1 - q]
                sgn = (-1) ** p * (-1) ** q
                if a_other.variance == b_other.variance:
                    continue
                pieces = [(Fraction(sgn), [_pair_metric(a_other, b_other)])]
            rest = [x for k, x in enumerate(fs) if k not in (i, j)]
            return [Term(coeff * c, t.lam, tuple(rest + extra)) for c, extra in pieces]
    return None


def contract_epsilons(x: Expr, backend, table: SymbolTable | None = None) -> ContractionResult:
    """Apply ε^{IJK} ε_{IMN} = s(δδ - δδ) to a fixed point.

    The internal rule fires only when the backend has the SO(2,1) form of
    the identity (s = -1); otherwise ``x`` is returned with ``suppressed``.
    """
    if backend is not None and not backend.identity_enabled:
        return ContractionResult(x, True, f"contraction identity not valid for {backend.name}")
    s = Fraction(-1) if backend is None else Fraction(backend.identity_sign)
    cur = contract_deltas_etas(x, backend, table)
    for _ in range(64):
        changed = False
        out = []
        for t in cur.terms:
            r = _epsilon_pair(t, s)
            if r is None:
                out.append(t)
            else:
                changed = True
                out.extend(r)
        cur = contract_deltas_etas(Expr(tuple(out)), backend, table)
        if not changed:
            break
    return ContractionResult(cur, False)


__all__ = ["ContractionResult", "contract_deltas_etas", "contract_epsilons", "relabel"]
