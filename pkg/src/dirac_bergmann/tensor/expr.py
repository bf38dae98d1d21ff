"""Indexed tensor expressions with exact rational coefficients.

An :class:`Expr` is a sum of :class:`Term`; a term is a rational
coefficient, a power of the cosmological constant and a product of
:class:`TensorFactor`.  Values are immutable; :func:`canonicalize`
produces the normal form used for equality.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction

from .symbols import (
    ANY,
    COV_TIME,
    DIMENSIONS,
    DOWN,
    INTERNAL,
    NUMERIC,
    SPACETIME,
    SPATIAL,
    TIME,
    UP,
    SymbolTable,
)


class ExprError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class IndexSlot:
    label: str
    kind: str
    variance: str

    @property
    def concrete(self) -> bool:
        return self.label.isdigit()

    def flipped(self) -> "IndexSlot":
        return replace(self, variance=UP if self.variance == DOWN else DOWN)

    def render(self) -> str:
        return self.variance + self.label


@dataclass(frozen=True, order=True)
class Deriv:
    """A derivative operator: ``op`` is ``"d"`` (partial) or ``"D"`` (opaque covariant)."""

    op: str
    slot: IndexSlot


@dataclass(frozen=True)
class TensorFactor:
    symbol: str
    slots: tuple = ()
    derivs: tuple = ()

    def labels(self):
        for s in self.slots:
            yield s
        for d in self.derivs:
            yield d.slot

    def render(self) -> str:
        body = self.symbol
        if self.slots or self.symbol not in ("Lam",):
            body += "[" + " ".join(s.render() for s in self.slots) + "]"
        for d in self.derivs:
            body = f"{d.op}_{d.slot.label}({body})"
        return body

    def sort_key(self):
        return (self.symbol, len(self.derivs), tuple(s.kind for s in self.slots), self.render())


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    lam: int = 0
    factors: tuple = ()

    def slots(self):
        for f in self.factors:
            yield from f.labels()

    def label_census(self) -> dict:
        out: dict[str, list] = {}
        for s in self.slots():
            if not s.concrete:
                out.setdefault(s.label, []).append(s)
        return out

    def free(self) -> frozenset:
        return frozenset(v[0] for v in self.label_census().values() if len(v) == 1)

    def dummies(self) -> dict:
        return {k: v[0].kind for k, v in self.label_census().items() if len(v) == 2}

    def render_body(self) -> str:
        parts = ["Lam"] * self.lam + [f.render() for f in self.factors]
        return " ".join(parts)


def _kind_compatible(k1: str, k2: str) -> bool:
    return k1 == k2


def validate_term(t: Term) -> None:
    for label, occ in t.label_census().items():
        if len(occ) > 2:
            raise ExprError(f"index {label!r} appears {len(occ)} times")
        if len(occ) == 2:
            a, b = occ
            if a.variance == b.variance:
                raise ExprError(f"index {label!r} repeated with the same variance")
            if not _kind_compatible(a.kind, b.kind):
                raise ExprError(f"kind mismatch on contraction of {label!r}: {a.kind} vs {b.kind}")


@dataclass(frozen=True)
class Expr:
    terms: tuple = ()

    # -- construction ---------------------------------------------------
    @staticmethod
    def zero() -> "Expr":
        return Expr(())

    @staticmethod
    def const(c, lam: int = 0) -> "Expr":
        c = Fraction(c)
        return Expr((Term(c, lam, ()),)) if c else Expr(())

    @staticmethod
    def factor(f: TensorFactor, coeff=1) -> "Expr":
        t = Term(Fraction(coeff), 0, (f,))
        validate_term(t)
        return Expr((t,))

    def is_zero(self) -> bool:
        return not self.terms

    def free_indices(self) -> frozenset:
        if not self.terms:
            return frozenset()
        return self.terms[0].free()

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other: "Expr") -> "Expr":
        if not isinstance(other, Expr):
            other = Expr.const(other)
        if self.terms and other.terms and self.free_indices() != other.free_indices():
            raise ExprError(
                f"free indices differ: {_fmt_free(self.free_indices())} vs {_fmt_free(other.free_indices())}"
            )
        return Expr(self.terms + other.terms)

    def __neg__(self) -> "Expr":
        return Expr(tuple(replace(t, coeff=-t.coeff) for t in self.terms))

    def __sub__(self, other: "Expr") -> "Expr":
        if not isinstance(other, Expr):
            other = Expr.const(other)
        return self + (-other)

    def scale(self, c, lam: int = 0) -> "Expr":
        c = Fraction(c)
        if not c:
            return Expr()
        return Expr(tuple(replace(t, coeff=t.coeff * c, lam=t.lam + lam) for t in self.terms))

    def __mul__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                out.append(multiply_terms(t1, t2))
        return Expr(tuple(out))

    __rmul__ = __mul__

    # -- output ---------------------------------------------------------
    def render(self) -> str:
        return render(self)

    def __str__(self) -> str:
        return render(self)


def _fmt_free(fs) -> str:
    return "{" + ",".join(f"{s.variance}{s.label}" for s in sorted(fs)) + "}"


# ---------------------------------------------------------------------------
# dummy renaming

_DUMMY_PREFIX = {INTERNAL: "Q", SPATIAL: "q", SPACETIME: "mu", TIME: "t"}
_FRESH_PREFIX = {INTERNAL: "Z", SPATIAL: "z", SPACETIME: "sigma", TIME: "t"}


def relabel(t: Term, mapping: dict) -> Term:
    def slot(s: IndexSlot) -> IndexSlot:
        return replace(s, label=mapping[s.label]) if s.label in mapping else s

    fs = []
    for f in t.factors:
        fs.append(
            TensorFactor(
                f.symbol,
                tuple(slot(s) for s in f.slots),
                tuple(Deriv(d.op, slot(d.slot)) for d in f.derivs),
            )
        )
    return Term(t.coeff, t.lam, tuple(fs))


_fresh_counter = itertools.count(1)


def fresh_label(kind: str, avoid) -> str:
    while True:
        name = f"{_FRESH_PREFIX[kind]}{next(_fresh_counter)}"
        if name not in avoid:
            return name


def multiply_terms(t1: Term, t2: Term) -> Term:
    labels1 = set(t1.label_census())
    d2 = t2.dummies()
    mapping = {}
    for lab, kind in d2.items():
        if lab in labels1:
            mapping[lab] = fresh_label(kind, labels1 | set(t2.label_census()))
    if mapping:
        t2 = relabel(t2, mapping)
    d1 = t1.dummies()
    labels2 = set(t2.label_census())
    mapping = {}
    for lab, kind in d1.items():
        if lab in labels2:
            mapping[lab] = fresh_label(kind, labels1 | labels2)
    if mapping:
        t1 = relabel(t1, mapping)
    t = Term(t1.coeff * t2.coeff, t1.lam + t2.lam, t1.factors + t2.factors)
    validate_term(t)
    return t


# ---------------------------------------------------------------------------
# canonical form

def _normalize_factor(f: TensorFactor, table: SymbolTable | None) -> tuple[int, TensorFactor]:
    """Sort (anti)symmetric slot groups; returns (sign, factor); sign 0 means zero."""
    spec = table.symbols.get(f.symbol) if table is not None else None
    slots = list(f.slots)
    sign = 1
    if spec is not None:
        for g in spec.antisym:
            sub = [slots[i] for i in g]
            if len({s.label for s in sub}) < len(sub):
                return 0, f
            order = sorted(range(len(sub)), key=lambda i: (sub[i].label, sub[i].variance))
            sign *= _perm_sign(order)
            for pos, i in zip(g, order):
                slots[pos] = sub[i]
        for g in spec.sym:
            sub = sorted((slots[i] for i in g), key=lambda s: (s.label, s.variance))
            for pos, s in zip(g, sub):
                slots[pos] = s
    derivs = f.derivs
    if all(d.op == "d" for d in derivs):
        # partial derivatives commute; covariant ones keep their order
        derivs = tuple(sorted(derivs, key=lambda d: d.slot.label))
    return sign, TensorFactor(f.symbol, tuple(slots), derivs)


def _perm_sign(order) -> int:
    s = 1
    o = list(order)
    for i in range(len(o)):
        for j in range(i + 1, len(o)):
            if o[i] > o[j]:
                s = -s
    return s


def _canonical_names(kind: str, n: int, avoid) -> list[str]:
    out = []
    k = 1
    while len(out) < n:
        name = f"{_DUMMY_PREFIX[kind]}{k}"
        if name not in avoid:
            out.append(name)
        k += 1
    return out


MAX_RELABELINGS = 40320


def _term_representative(t: Term, table) -> tuple[int, tuple]:
    sign = 1
    fs = []
    for f in t.factors:
        s, nf = _normalize_factor(f, table)
        if s == 0:
            return 0, ()
        sign *= s
        fs.append(nf)
    fs.sort(key=lambda f: f.sort_key())
    return sign, tuple(fs)


def canonical_term(t: Term, table: SymbolTable | None = None) -> Term | None:
    """Canonical representative of a single term, or None if it vanishes."""
    dummies = t.dummies()
    free = t.free()
    avoid = {s.label for s in free}
    by_kind: dict[str, list[str]] = {}
    for lab, kind in sorted(dummies.items()):
        by_kind.setdefault(kind, []).append(lab)
    kinds = sorted(by_kind)
    names = {k: _canonical_names(k, len(by_kind[k]), avoid) for k in kinds}
    total = 1
    for k in kinds:
        for i in range(2, len(by_kind[k]) + 1):
            total *= i
    if total > MAX_RELABELINGS:
        return _heuristic_canonical(t, table, by_kind, names)
    best = None
    best_signs = set()
    for perms in itertools.product(*(itertools.permutations(names[k]) for k in kinds)):
        mapping = {}
        for k, perm in zip(kinds, perms):
            mapping.update(zip(by_kind[k], perm))
        sign, fs = _term_representative(relabel(t, mapping), table)
        if sign == 0:
            return None
        key = tuple(f.render() for f in fs)
        if best is None or key < best[0]:
            best = (key, fs)
            best_signs = {sign}
        elif key == best[0]:
            best_signs.add(sign)
    if best is None:
        sign, fs = _term_representative(t, table)
        if sign == 0:
            return None
        return Term(t.coeff * sign, t.lam, fs)
    if len(best_signs) > 1:
        return None
    return Term(t.coeff * best_signs.pop(), t.lam, best[1])


def _heuristic_canonical(t, table, by_kind, names):
    sign, fs = _term_representative(t, table)
    if sign == 0:
        return None
    order = []
    for f in fs:
        for s in f.labels():
            if s.label in t.dummies() and s.label not in order:
                order.append(s.label)
    mapping = {}
    counters = {k: iter(v) for k, v in names.items()}
    dk = t.dummies()
    for lab in order:
        mapping[lab] = next(counters[dk[lab]])
    s2, fs2 = _term_representative(relabel(Term(t.coeff, t.lam, fs), mapping), table)
    if s2 == 0:
        return None
    return Term(t.coeff * sign * s2, t.lam, fs2)


def canonicalize(x: Expr, table: SymbolTable | None = None) -> Expr:
    """Normal form: dummies renamed, symmetric slots sorted, like terms merged."""
    acc: dict[tuple, Fraction] = {}
    rep: dict[tuple, Term] = {}
    for t in x.terms:
        validate_term(t)
        ct = canonical_term(t, table)
        if ct is None or not ct.coeff:
            continue
        key = (ct.lam, tuple(f.render() for f in ct.factors))
        acc[key] = acc.get(key, 0) + ct.coeff
        rep[key] = ct
    terms = []
    for key in sorted(acc, key=lambda k: (k[1], k[0])):
        c = acc[key]
        if c:
            terms.append(replace(rep[key], coeff=c))
    return Expr(tuple(terms))


def equal(x: Expr, y: Expr, table: SymbolTable | None = None) -> bool:
    return canonicalize(x - y, table).is_zero()


def equivalent(x: Expr, y: Expr, table: SymbolTable) -> bool:
    """Equality after expanding covariant derivatives and curvatures into partials."""
    if equal(x, y, table):
        return True
    return canonicalize(expand_covariant(x - y, table), table).is_zero()


# ---------------------------------------------------------------------------
# rendering

def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(x: Expr) -> str:
    if not x.terms:
        return "0"
    out = []
    for i, t in enumerate(x.terms):
        c = t.coeff
        body = t.render_body()
        neg = c < 0
        mag = -c if neg else c
        if not body:
            piece = _render_coeff(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{_render_coeff(mag)} {body}"
        if i == 0:
            out.append(("-" if neg else "") + piece)
        else:
            out.append((" - " if neg else " + ") + piece)
    return "".join(out)


# ---------------------------------------------------------------------------
# derivatives

def partial(x: Expr, slot: IndexSlot, table: SymbolTable, op: str = "d") -> Expr:
    """Leibniz-expanded derivative ``op_slot`` of ``x``; numeric tensors are constant."""
    out = []
    for t in x.terms:
        for i, f in enumerate(t.factors):
            spec = table.symbols.get(f.symbol)
            if spec is not None and spec.role == NUMERIC:
                continue
            nf = TensorFactor(f.symbol, f.slots, f.derivs + (Deriv(op, slot),))
            nt = Term(t.coeff, t.lam, t.factors[:i] + (nf,) + t.factors[i + 1:])
            validate_term(nt)
            out.append(nt)
    return Expr(tuple(out))


def _connection_terms(f: TensorFactor, pos: int, slot: IndexSlot, table: SymbolTable, avoid) -> list:
    """Connection contribution of covariant derivative ``D_slot`` for internal slot ``pos``."""
    mode, conn = table.connection
    s = f.slots[pos]
    new = fresh_label(INTERNAL, avoid)
    avoid.add(new)
    dslot = replace(slot, variance=DOWN)
    inner_slots = list(f.slots)
    inner_slots[pos] = IndexSlot(new, INTERNAL, s.variance)
    inner = TensorFactor(f.symbol, tuple(inner_slots), f.derivs)
    if mode == "pair":
        if s.variance == UP:
            # + A_a^I_M X^M
            a = TensorFactor(conn, (dslot, IndexSlot(s.label, INTERNAL, UP), IndexSlot(new, INTERNAL, DOWN)))
            return [(Fraction(1), [a, inner])]
        # - A_a^M_I X_M
        a = TensorFactor(conn, (dslot, IndexSlot(new, INTERNAL, UP), IndexSlot(s.label, INTERNAL, DOWN)))
        return [(Fraction(-1), [a, inner])]
    if mode == "adjoint":
        j = fresh_label(INTERNAL, avoid)
        avoid.add(j)
        a = TensorFactor(conn, (dslot, IndexSlot(j, INTERNAL, UP)))
        if s.variance == UP:
            # + f^I_{JK} A^J X^K
            fc = TensorFactor("epsI", (IndexSlot(s.label, INTERNAL, UP), IndexSlot(j, INTERNAL, DOWN),
                                       IndexSlot(new, INTERNAL, DOWN)))
            return [(Fraction(1), [fc, a, inner])]
        # - f^K_{JI} A^J X_K
        fc = TensorFactor("epsI", (IndexSlot(new, INTERNAL, UP), IndexSlot(j, INTERNAL, DOWN),
                                   IndexSlot(s.label, INTERNAL, DOWN)))
        return [(Fraction(-1), [fc, a, inner])]
    raise ExprError(f"unknown connection mode {mode!r}")


def covariant(x: Expr, slot: IndexSlot, table: SymbolTable) -> Expr:
    """Gauge-covariant derivative acting on internal indices, expanded to ∂-form.

    ``D_0`` on a parameter is kept as an opaque derivative.
    """
    out = []
    for t in x.terms:
        avoid = set(t.label_census()) | {slot.label}
        for i, f in enumerate(t.factors):
            spec = table.symbols.get(f.symbol)
            if spec is not None and spec.role == NUMERIC:
                continue
            if slot.kind == TIME and spec is not None and spec.role == "param":
                nf = TensorFactor(f.symbol, f.slots, f.derivs + (Deriv("D", slot),))
                out.append(Term(t.coeff, t.lam, t.factors[:i] + (nf,) + t.factors[i + 1:]))
                continue
            nf = TensorFactor(f.symbol, f.slots, f.derivs + (Deriv("d", slot),))
            out.append(Term(t.coeff, t.lam, t.factors[:i] + (nf,) + t.factors[i + 1:]))
            for pos, s in enumerate(f.slots):
                if s.kind != INTERNAL:
                    continue
                for c, fs in _connection_terms(f, pos, slot, table, avoid):
                    nt = Term(t.coeff * c, t.lam, t.factors[:i] + tuple(fs) + t.factors[i + 1:])
                    validate_term(nt)
                    out.append(nt)
    return Expr(tuple(out))


def is_opaque(d: Deriv, f: TensorFactor, table: SymbolTable) -> bool:
    """True for ``D_0`` acting on a gauge parameter (kept as an opaque derivative)."""
    spec = table.symbols.get(f.symbol)
    return d.op == "D" and d.slot.kind == TIME and spec is not None and spec.role == "param"


def needs_expansion(f: TensorFactor, table: SymbolTable) -> bool:
    spec = table.symbols.get(f.symbol)
    if spec is not None and spec.role == "curvature":
        return True
    return any(d.op == "D" and not is_opaque(d, f, table) for d in f.derivs)


def expand_factor(f: TensorFactor, table: SymbolTable) -> Expr:
    """∂-form of a factor carrying curvature or covariant derivatives."""
    from .parser import expand_curvature

    bare = TensorFactor(f.symbol, f.slots, ())
    spec = table.symbols.get(f.symbol)
    x = expand_curvature(bare, table) if spec is not None and spec.role == "curvature" else Expr.factor(bare)
    for d in f.derivs:
        if d.op == "d":
            x = partial(x, d.slot, table)
        else:
            x = covariant(x, d.slot, table)
    return x


def expand_covariant(x: Expr, table: SymbolTable) -> Expr:
    """Rewrite every ``D`` and ``F`` in ∂-form (opaque ``D_0`` on parameters is kept)."""
    out = []
    for t in x.terms:
        if not any(needs_expansion(f, table) for f in t.factors):
            out.append(t)
            continue
        acc = Expr((Term(t.coeff, t.lam, ()),))
        for f in t.factors:
            piece = expand_factor(f, table) if needs_expansion(f, table) else Expr.factor(f)
            acc = acc * piece
        out.extend(acc.terms)
    return Expr(tuple(out))


def substitute_labels(x: Expr, mapping: dict) -> Expr:
    """Rename free labels (e.g. to concrete component values)."""
    return Expr(tuple(relabel(t, mapping) for t in x.terms))


def dimension_of(kind: str) -> int:
    return DIMENSIONS[kind]


def term_symbols(t: Term) -> Counter:
    return Counter(f.symbol for f in t.factors)


__all__ = [
    "ANY",
    "COV_TIME",
    "Deriv",
    "Expr",
    "ExprError",
    "IndexSlot",
    "SPACETIME",
    "Term",
    "TensorFactor",
    "canonicalize",
    "covariant",
    "equal",
    "multiply_terms",
    "partial",
    "render",
    "substitute_labels",
]
