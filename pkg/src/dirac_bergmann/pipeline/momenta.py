"""Momenta, primary constraints, and the canonical and primary Hamiltonians."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..phase_space import abstract_functional_derivative
from ..poly import LAM, Poly, base, is_divergence
from ..tensor.components import independent_components, to_poly
from ..tensor.expr import Expr, Term, TensorFactor, canonicalize, render
from ..tensor.rewrite import integrate_by_parts, replace_pattern
from ..tensor.symbols import PARAM, SPACETIME, TIME, SymbolSpec, INTERNAL, UP, DOWN
from ..theories import Theory, field_template
from .constraints import PRIMARY, Constraint, Surface, constraint_from_expr, random_point
from .linalg import rank as matrix_rank


class PipelineError(RuntimeError):
    """A stage of the constraint analysis failed; ``stage`` names it."""

    def __init__(self, stage: str, msg: str):
        super().__init__(f"[{stage}] {msg}")
        self.stage = stage


@dataclass
class PrimaryResult:
    primaries: list
    hessian_rank: int
    n_velocities: int
    hessian_constant: bool
    lagrangian_poly: Poly
    velocity_solution: dict = field(default_factory=dict)

    @property
    def spacetime_count(self) -> int:
        return sum(c.spacetime_count() for c in self.primaries)

    @property
    def full_count(self) -> int:
        return sum(c.size for c in self.primaries)


def _is_velocity(v, ps) -> bool:
    return v[0] in ps.field_names() and v[2] == (0,)


def _families(theory: Theory):
    for fs in theory.fields:
        spec = theory.table.get(fs.field)
        has_st = any(k == SPACETIME for k, _ in spec.slots)
        for split in (("0", "a") if has_st else ("",)):
            ftxt, mtxt, _ = field_template(spec, split)
            yield fs, split, f"{fs.field}[{ftxt}]", f"{fs.momentum}[{mtxt}]"


def derive_momenta_and_primaries(theory: Theory, seed: int = 0) -> PrimaryResult:
    """Momenta from velocity derivatives, the Hessian rank and the primary constraints.

    Each family (a field with its first spacetime index either ``0`` or
    spatial) gets the index-notation constraint ``Π - ∂L/∂q̇``; every
    component is cross-checked against the component Lagrangian.
    """
    ps, table = theory.ps, theory.table
    L = to_poly(theory.lagrangian, table, theory.backend)
    for v in L.variables():
        if v[0] in ps.field_names() and 0 in v[2] and len(v[2]) > 1:
            raise PipelineError("momenta", f"second-order time derivative {v} in the Lagrangian")
    vel = sorted({v for v in L.variables() if _is_velocity(v, ps)})
    # every velocity, including ones absent from L
    all_vel = sorted({(q[0], q[1], (0,)) for q, _, _ in ps.pairs})
    hess = [[L.diff(a).diff(b) for b in all_vel] for a in all_vel]
    constant = all(h.constant_value() is not None for row in hess for h in row)
    rng = random.Random(seed)
    r = 0
    for _ in range(3):
        vals = random_point({x for row in hess for h in row for x in h.variables()}, rng)
        num = [[h.evaluate(vals) for h in row] for row in hess]
        r = max(r, matrix_rank(num))
    weights = {q: w for q, _, w in ps.pairs}
    if r == 0:
        prims = []
        for fs, split, ftxt, mtxt in _families(theory):
            dL = abstract_functional_derivative(theory.lagrangian, f"d_0({ftxt})", table)
            expr = canonicalize(theory.parse(mtxt) - dL, table)
            name = theory.primary_names.get((fs.field, split), f"phi{split or ''}{fs.field}")
            c = constraint_from_expr(name, expr, table, theory.backend, pedigree=PRIMARY,
                                     origin=f"momentum of {ftxt}")
            for comps, dens in c.components.items():
                q = _component_of(c, comps, fs.field, table)
                expect = Poly.var((fs.momentum, q[1], ())) - L.diff((fs.field, q[1], (0,))).scale(weights[q])
                if dens != expect:
                    raise PipelineError("momenta", f"{name}{list(comps)} disagrees with the component Lagrangian")
            prims.append(c)
        return PrimaryResult(prims, 0, len(all_vel), constant, L)
    if r == len(all_vel) and constant:
        # regular: p = w ∂L/∂v  =>  v = H^{-1} (p/w - g)
        import sympy

        n = len(all_vel)
        H = sympy.Matrix(n, n, lambda i, j: sympy.Rational(str(hess[i][j].constant_value())))
        Hinv = H.inv()
        g = [L.diff(v).filter(lambda m: not any(_is_velocity(x, ps) for x in m)) for v in all_vel]
        sol = {}
        for i, v in enumerate(all_vel):
            acc = Poly()
            for j, u in enumerate(all_vel):
                c = Hinv[i, j]
                if c == 0:
                    continue
                q = (u[0], u[1])
                mom = next(p for qq, p, w in ps.pairs if qq == q)
                rhs = Poly.var((mom[0], mom[1], ())).scale(1 / weights[q]) - g[j]
                acc = acc + rhs.scale(Fraction(int(c.p), int(c.q)))
            sol[v] = acc
        return PrimaryResult([], r, n, constant, L, sol)
    raise PipelineError("momenta", f"partially singular Hessian (rank {r} of {len(all_vel)}) is not supported")


def _component_of(c: Constraint, comps, fieldname, table):
    """Map a family component to the ``(field, comps)`` base it constrains."""
    spec = table.get(fieldname)
    labels = {s.label: v for s, v in zip(c.free, comps)}
    out = []
    it = iter("IJKLMN")
    for kind, _ in spec.slots:
        if kind == SPACETIME:
            out.append(labels.get("a", 0))
        else:
            out.append(labels[next(it)])
    return (fieldname, tuple(out))


# ---------------------------------------------------------------------------
# Hamiltonians

@dataclass
class HamiltonianResult:
    canonical: Expr | None
    canonical_poly: Poly
    primary: Expr | None
    primary_poly: Poly
    multipliers: dict
    certified: bool

    def render(self) -> str:
        return render(self.canonical) if self.canonical is not None else "<component form only>"


def _dual_spec(c: Constraint, name: str) -> SymbolSpec:
    slots = tuple((INTERNAL if s.kind == INTERNAL else SPACETIME, UP if s.variance == DOWN else DOWN)
                  for s in c.free)
    return SymbolSpec(name, slots, antisym=c.antisym, role=PARAM)


def multiplier_factor(c: Constraint, name: str) -> Expr:
    from ..tensor.expr import IndexSlot

    slots = tuple(IndexSlot(s.label, s.kind, UP if s.variance == DOWN else DOWN) for s in c.free)
    return Expr.factor(TensorFactor(name, slots))


def _lift_scalar(p: Poly, table) -> Expr | None:
    """Index-free polynomial back to an Expr (only for symbols without slots)."""
    out = Expr()
    for m, coeff in sorted(p.terms.items()):
        fs = []
        lam = 0
        for v in m:
            if v == LAM:
                lam += 1
                continue
            if v[1] or v[2]:
                return None
            fs.append(TensorFactor(v[0], ()))
        out = out + Expr((Term(Fraction(coeff), lam, tuple(fs)),))
    return canonicalize(out, table)


def build_hamiltonians(theory: Theory, prim: PrimaryResult) -> HamiltonianResult:
    """Canonical Hamiltonian ``Σ p q̇ - L`` and primary Hamiltonian ``H_C + Σ λ φ``.

    For a Lagrangian linear in velocities the canonical Hamiltonian is the
    velocity-free part of ``-L`` on the primary surface.  Its index form is
    obtained by integrating derivatives off the time components (which act
    as multipliers) and replacing momentum expressions by momenta; the
    result is certified against the component computation.
    """
    table, ps = theory.table, theory.ps
    L = prim.lagrangian_poly
    weights = {q: w for q, _, w in ps.pairs}
    if prim.velocity_solution:
        vel = prim.velocity_solution
        pv = Poly()
        for v, sol in vel.items():
            q = (v[0], v[1])
            mom = next(p for qq, p, w in ps.pairs if qq == q)
            pv = pv + Poly.var((mom[0], mom[1], ())) * sol.scale(1 / weights[q])
        hc = pv - L.substitute(lambda u: vel.get(u))
        abstract = _lift_scalar(hc, table)
    else:
        hc = -L.filter(lambda m: not any(_is_velocity(x, ps) for x in m))
        x = Expr(tuple(t for t in theory.lagrangian.terms
                       if not any(f.symbol in ps.field_names() and any(d.slot.kind == TIME for d in f.derivs)
                                  for f in t.factors)))
        x = canonicalize(-x, table)

        def frozen(f):
            return f.symbol in ps.field_names() and any(s.kind == TIME for s in f.slots)

        x = integrate_by_parts(x, frozen, table)
        for c in prim.primaries:
            mom = [t for t in c.expr.terms if any(f.symbol in ps.momentum_names() for f in t.factors)]
            rest = Expr(tuple(t for t in c.expr.terms if t not in mom))
            if len(mom) == 1 and len(rest.terms) == 1:
                x = replace_pattern(x, -rest, Expr(tuple(mom)), table)
        abstract = x
    certified = False
    if abstract is not None:
        diff = to_poly(abstract, table, theory.backend) - hc
        surf = Surface(ps, [p for c in prim.primaries for _, p in c.items()])
        certified = is_divergence(surf.reduce(diff))
        if certified:
            # the index form is weakly equal to -L0; use it from here on
            hc = to_poly(abstract, table, theory.backend)
        else:
            abstract = None
    mults = {}
    hp = hc
    hp_expr = abstract
    for c in prim.primaries:
        name = theory.multiplier_names.get(c.name, "l" + c.name)
        spec = _dual_spec(c, name)
        table.register(spec)
        mults[c.name] = name
        hp = hp + c.smeared(name)
        if hp_expr is not None:
            hp_expr = hp_expr + multiplier_factor(c, name) * c.expr
    if hp_expr is not None:
        hp_expr = canonicalize(hp_expr, table)
    return HamiltonianResult(abstract, hc, hp_expr, hp, mults, certified)


__all__ = [
    "HamiltonianResult",
    "PipelineError",
    "PrimaryResult",
    "build_hamiltonians",
    "derive_momenta_and_primaries",
    "multiplier_factor",
]
