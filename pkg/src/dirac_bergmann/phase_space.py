"""Phase-space registry, smeared functionals and the Poisson-bracket engine.

Brackets are computed on component polynomials.  Each canonical pair is an
independent field component ``q`` and its momentum component ``p`` with
weight ``w = {q, p}``: 1 for ``(e, Π_e)`` and 1/2 for an antisymmetric pair
``(A^{IJ}, Π_{IJ})`` with ``I < J``.  For functionals
``F = ∫ f`` and ``G = ∫ g`` the bracket density is

    Σ w (E_q f · E_p g - E_p f · E_q g)

with ``E`` the Euler operator; boundary terms are dropped.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .poly import CONSTANT_NAMES, LAM, Poly, base, euler, is_divergence, with_derivs
from .tensor.components import independent_components, to_poly
from .tensor.contract import contract_deltas_etas
from .tensor.expr import (
    Expr,
    IndexSlot,
    TensorFactor,
    Term,
    canonicalize,
    expand_covariant,
    partial,
    substitute_labels,
)
from .tensor.symbols import (
    DOWN,
    INTERNAL,
    MOMENTUM,
    PARAM,
    SPACETIME,
    SPATIAL,
    TIME,
    UP,
    SymbolSpec,
    SymbolTable,
)


class PhaseSpaceError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """A configuration field, its conjugate momentum and bracket projector."""

    field: str
    momentum: str
    projector: str = "identity"  # or "antisym"

    def weight(self) -> Fraction:
        return Fraction(1, 2) if self.projector == "antisym" else Fraction(1)


@dataclass
class PhaseSpaceRegistry:
    table: SymbolTable
    backend: object
    fields: tuple = ()
    _pairs: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        seen = set()
        for fs in self.fields:
            spec = self.table.get(fs.field)
            mspec = self.table.get(fs.momentum)
            if fs.momentum in seen or fs.field in seen:
                raise PhaseSpaceError(f"{fs.field} registered twice")
            seen.update((fs.field, fs.momentum))
            if mspec.role != MOMENTUM:
                raise PhaseSpaceError(f"{fs.momentum} is not declared as a momentum")
            want = "antisym" if spec.antisym else "identity"
            if fs.projector != want:
                raise PhaseSpaceError(f"projector of {fs.field} must be {want}")
            for comps in independent_components(spec):
                self._pairs.append(((fs.field, comps), (fs.momentum, comps), fs.weight()))

    @property
    def pairs(self) -> list:
        return list(self._pairs)

    def field_names(self) -> set:
        return {f.field for f in self.fields}

    def momentum_names(self) -> set:
        return {f.momentum for f in self.fields}

    def canonical_names(self) -> set:
        return self.field_names() | self.momentum_names()

    def count(self, spacetime_only: bool = False) -> int:
        """Number of canonical variables (fields plus momenta)."""
        if spacetime_only:
            # internal slots are not multiplied out; each spacetime slot ranges over 3 values
            return 2 * sum(3 ** sum(k == SPACETIME for k, _ in self.table.get(f.field).slots) for f in self.fields)
        return 2 * len(self._pairs)

    def check_no_velocities(self, p: Poly, what: str = "bracket input"):
        for v in p.variables():
            if v[0] in self.canonical_names() and 0 in v[2]:
                raise PhaseSpaceError(f"time derivative {v} in {what}")


@dataclass
class SmearedFunctional:
    """``∫ density``; ``params`` lists the smearing-parameter symbols it contains."""

    name: str
    density: Poly
    expr: Expr | None = None
    params: tuple = ()

    def __repr__(self):
        return f"SmearedFunctional({self.name!r}, {len(self.density)} terms)"


# ---------------------------------------------------------------------------
# functional derivatives

def functional_derivative(F, var_base: tuple, ps: PhaseSpaceRegistry | None = None) -> Poly:
    """Euler-Lagrange derivative ``δ∫F/δφ`` for a component ``var_base = (name, comps)``."""
    density = F.density if isinstance(F, SmearedFunctional) else F
    if ps is not None and var_base[0] not in ps.table:
        raise PhaseSpaceError(f"symbol {var_base[0]!r} not registered")
    return euler(density, var_base, dims=(0, 1, 2))


def _projector_factors(fslot_list, target_slots, spec, table) -> list[tuple[Fraction, list]]:
    """Derivative of a factor's slots with respect to the target's slots."""
    def link(s: IndexSlot, t: IndexSlot) -> TensorFactor:
        tv = UP if t.variance == DOWN else DOWN
        if s.variance != tv:
            up, down = (s, IndexSlot(t.label, t.kind, tv)) if s.variance == UP else (IndexSlot(t.label, t.kind, tv), s)
            return TensorFactor("delta", (up, down))
        if s.kind != INTERNAL:
            raise PhaseSpaceError("spacetime variance mismatch in functional derivative")
        return TensorFactor("eta", (s, IndexSlot(t.label, t.kind, tv)))

    groups = [g for g in spec.antisym]
    out = [(Fraction(1), [])]
    done = set()
    for g in groups:
        perms = list(itertools.permutations(range(len(g))))
        new = []
        for c, fs in out:
            for perm in perms:
                sign = 1
                for i in range(len(perm)):
                    for j in range(i + 1, len(perm)):
                        if perm[i] > perm[j]:
                            sign = -sign
                extra = [link(fslot_list[g[k]], target_slots[g[perm[k]]]) for k in range(len(g))]
                new.append((c * sign / len(perms), fs + extra))
        out = new
        done.update(g)
    rest = [link(fslot_list[i], target_slots[i]) for i in range(len(fslot_list)) if i not in done]
    return [(c, fs + rest) for c, fs in out]


def _slot_matches(s: IndexSlot, t: IndexSlot) -> bool:
    if t.concrete:
        return s.concrete and s.label == t.label
    if t.kind == SPACETIME:
        return s.kind in (SPACETIME, SPATIAL, TIME)
    return s.kind == t.kind


def abstract_functional_derivative(L: Expr, target: str, table: SymbolTable) -> Expr:
    """Index-notation Euler derivative of ``∫L`` with respect to a factor such as ``d_0(A[_a ^I ^J])``.

    Matching factors are replaced by δ/η projectors (antisymmetrized for
    antisymmetric slot groups); spatial derivatives are moved off by parts.
    """
    from .tensor.parser import parse_raw

    tx = parse_raw(target, table)
    (tt,) = tx.terms
    (tf,) = tt.factors
    spec = table.get(tf.symbol)
    L = expand_covariant(L, table)
    out = Expr()
    tderivs = sorted((d.op, d.slot.label) for d in tf.derivs)
    for t in L.terms:
        for i, f in enumerate(t.factors):
            if f.symbol != tf.symbol:
                continue
            if not all(_slot_matches(s, u) for s, u in zip(f.slots, tf.slots)):
                continue
            # derivatives of the target must be present; the remaining spatial ones move by parts
            extra = list(f.derivs)
            ok = True
            for op, lab in tderivs:
                hit = next((d for d in extra if d.op == op and d.slot.label == lab), None)
                if hit is None:
                    ok = False
                    break
                extra.remove(hit)
            if not ok or any(d.slot.kind == TIME for d in extra):
                continue
            rest = t.factors[:i] + t.factors[i + 1:]
            fslots = list(f.slots)
            tslots = list(tf.slots)
            for c, proj in _projector_factors(fslots, tslots, spec, table):
                piece = Expr((Term(t.coeff * c, t.lam, tuple(rest) + tuple(proj)),))
                for d in extra:
                    piece = -partial(piece, d.slot, table)
                out = out + piece
    return contract_deltas_etas(out, None, table)


# ---------------------------------------------------------------------------
# smearing helpers

def param_signature(x: Expr) -> list[IndexSlot]:
    """Free slots of ``x`` sorted by label."""
    return sorted(x.free_indices(), key=lambda s: s.label)


def _antisym_pairs(x: Expr, free: list, table: SymbolTable) -> list:
    groups = []
    internal = [s for s in free if s.kind == INTERNAL]
    for a, b in itertools.combinations(internal, 2):
        if a.variance != b.variance:
            continue
        swapped = substitute_labels(x, {a.label: b.label, b.label: a.label})
        if canonicalize(x + swapped, table).is_zero():
            groups.append((free.index(a), free.index(b)))
    return groups


def smearing_param(x: Expr, name: str, table: SymbolTable, antisym=None) -> tuple[SymbolSpec, Expr]:
    """A parameter symbol dual to the free indices of ``x`` and the smeared density ``s·x``."""
    free = param_signature(x)
    slots = []
    for s in free:
        kind = INTERNAL if s.kind == INTERNAL else SPACETIME
        slots.append((kind, UP if s.variance == DOWN else DOWN))
    if antisym is None:
        antisym = _antisym_pairs(x, free, table)
    spec = SymbolSpec(name, tuple(slots), antisym=tuple(tuple(g) for g in antisym), role=PARAM)
    pslots = tuple(IndexSlot(s.label, s.kind, UP if s.variance == DOWN else DOWN) for s in free)
    pf = TensorFactor(name, pslots)
    return spec, Expr((Term(Fraction(1), 0, (pf,)),)) * x


def smear(x: Expr, name: str, table: SymbolTable, backend, antisym=None) -> tuple[SmearedFunctional, SymbolTable]:
    """Smear ``x`` with a fresh parameter; returns the functional and the extended table."""
    spec, density = smearing_param(x, name, table, antisym)
    t2 = table.with_params(spec)
    return SmearedFunctional(name, to_poly(density, t2, backend), density, (name,)), t2


# ---------------------------------------------------------------------------
# brackets

def _density(F) -> Poly:
    return F.density if isinstance(F, SmearedFunctional) else F


def poisson_bracket(F, G, ps: PhaseSpaceRegistry) -> Poly:
    """Bracket density of two functionals (a local density in both smearings)."""
    f, g = _density(F), _density(G)
    ps.check_no_velocities(f)
    ps.check_no_velocities(g)
    fv = {base(v) for v in f.variables()}
    gv = {base(v) for v in g.variables()}
    out = Poly()
    for q, p, w in ps.pairs:
        if q in fv and p in gv:
            out = out + (euler(f, q) * euler(g, p)).scale(w)
        if p in fv and q in gv:
            out = out - (euler(f, p) * euler(g, q)).scale(w)
    return out


def local_bracket(C: Poly, G, ps: PhaseSpaceRegistry) -> Poly:
    """``{C(x), G}`` for a local density ``C`` and a functional ``G``."""
    g = _density(G)
    ps.check_no_velocities(C)
    cache: dict = {}

    def eul(b):
        if b not in cache:
            cache[b] = euler(g, b)
        return cache[b]

    out = Poly()
    pairs = {q: (p, w) for q, p, w in ps.pairs}
    mom = {p: (q, w) for q, p, w in ps.pairs}
    for v in sorted(C.variables()):
        b = base(v)
        if b in pairs:
            p, w = pairs[b]
            e = eul(p)
            if e:
                out = out + (C.diff(v) * e.derivative(v[2])).scale(w)
        elif b in mom:
            q, w = mom[b]
            e = eul(q)
            if e:
                out = out - (C.diff(v) * e.derivative(v[2])).scale(w)
    return out


def strip_divergence_equal(p: Poly, q: Poly) -> bool:
    return is_divergence(p - q)


def params_in(p: Poly, names: Iterable[str]) -> set:
    names = set(names)
    return {base(v) for v in p.variables() if v[0] in names}


def normal_form(p: Poly, param: str) -> Poly:
    """``Σ_c s_c E_{s_c}(p)``: moves every derivative off the smearing parameter ``param``."""
    out = Poly()
    for b in sorted(params_in(p, [param])):
        out = out + Poly.var((b[0], b[1], ())) * euler(p, b)
    rest = p.filter(lambda m: not any(v[0] == param for v in m))
    return out + rest


def integrals_equal(p: Poly, q: Poly, params=("s1",)) -> bool:
    """True iff ``∫p = ∫q`` for every value of the (linear) smearing parameters."""
    d = p - q
    if not d:
        return True
    for name in params:
        bs = params_in(d, [name])
        if bs:
            return all(not euler(d, b) for b in bs)
    return is_divergence(d)


def check_antisymmetry_jacobi(F, G, H, ps: PhaseSpaceRegistry):
    """Returns ``(ok, residual)`` for antisymmetry of {F,G} and the Jacobi identity."""
    fg = poisson_bracket(F, G, ps)
    gf = poisson_bracket(G, F, ps)
    anti = fg + gf
    if anti and not is_divergence(anti):
        return False, anti
    j = (poisson_bracket(fg, H, ps) + poisson_bracket(poisson_bracket(G, H, ps), F, ps)
         + poisson_bracket(poisson_bracket(H, F, ps), G, ps))
    if j and not is_divergence(j):
        return False, j
    return True, Poly()


def palatini_phase_space(table: SymbolTable, backend) -> PhaseSpaceRegistry:
    return PhaseSpaceRegistry(table, backend, (FieldSpec("e", "Pe"), FieldSpec("A", "PA", "antisym")))


__all__ = [
    "FieldSpec",
    "PhaseSpaceError",
    "PhaseSpaceRegistry",
    "SmearedFunctional",
    "abstract_functional_derivative",
    "check_antisymmetry_jacobi",
    "functional_derivative",
    "integrals_equal",
    "local_bracket",
    "normal_form",
    "palatini_phase_space",
    "poisson_bracket",
    "smear",
    "smearing_param",
]
