"""Time evolution of constraints: multipliers, secondaries and the fixed point."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..phase_space import abstract_functional_derivative, local_bracket
from ..poly import Poly, base
from ..tensor.expr import canonicalize
from ..theories import Theory, field_template
from .constraints import SECONDARY, Constraint, Surface, constraint_from_expr
from .momenta import HamiltonianResult, PipelineError, PrimaryResult


@dataclass
class MultiplierSolution:
    """Multipliers fixed by consistency, as functions of the canonical variables.

    ``solved`` maps undifferentiated multiplier components to polynomials;
    ``free`` lists the components left arbitrary.
    """

    solved: dict = field(default_factory=dict)
    free: list = field(default_factory=list)
    names: tuple = ()

    def substitute(self, p: Poly) -> Poly:
        def sub(v):
            b = (v[0], v[1], ())
            if b in self.solved:
                return self.solved[b].derivative(v[2]) if v[2] else self.solved[b]
            return None
        return p.substitute(sub)

    def for_family(self, name: str) -> dict:
        return {v: p for v, p in self.solved.items() if v[0] == name}


@dataclass
class ConsistencyResult:
    primaries: list
    secondaries: list
    multipliers: MultiplierSolution
    conditions: dict          # constraint name -> {comps: condition density}
    rounds: int
    tertiary: list = field(default_factory=list)

    @property
    def constraints(self) -> list:
        return list(self.primaries) + list(self.secondaries)

    @property
    def fixed_point(self) -> bool:
        return not self.tertiary


def _is_mult(v, names) -> bool:
    return v[0] in names


def _split_linear(p: Poly, names):
    """``p = Σ coeff_v v + rest`` for multiplier variables ``v`` (p is at most linear in them)."""
    coeffs = {}
    rest = Poly()
    for m, c in p.terms.items():
        ms = [v for v in m if _is_mult(v, names)]
        if not ms:
            rest = rest + Poly({m: c})
            continue
        if len(ms) > 1:
            raise PipelineError("consistency", "condition is nonlinear in the multipliers")
        (v,) = ms
        others = list(m)
        others.remove(v)
        coeffs[v] = coeffs.get(v, Poly()) + Poly.from_mono(tuple(others), c)
    return coeffs, rest


def _solve_conditions(rows, names, surface: Surface):
    """Solve the constant-coefficient part of a linear system for multipliers.

    ``rows`` is a list of ``(key, poly)``.  Returns ``(solution, leftovers)``
    where leftovers are ``(key, poly)`` rows that involve no solvable
    multiplier after elimination.
    """
    solution: dict = {}
    pending = []
    for key, p in rows:
        p = surface.reduce(p)
        pending.append((key, p))
    # exact elimination with polynomial right-hand sides
    pivots: list = []   # (var, row poly normalised so coeff(var) == 1)
    leftovers = []
    for key, p in pending:
        for v, q in pivots:
            c, _ = _split_linear(p, names)
            if v in c:
                k = c[v].constant_value()
                if k is None:
                    continue
                p = p - q.scale(k)
        coeffs, rest = _split_linear(p, names)
        pick = None
        for v in sorted(coeffs):
            if v[2]:
                continue
            k = coeffs[v].constant_value()
            if k:
                pick = (v, k)
                break
        if pick is None:
            leftovers.append((key, p))
            continue
        v, k = pick
        q = p.scale(1 / k)
        # back-substitute into earlier pivots
        new = []
        for u, r in pivots:
            c, _ = _split_linear(r, names)
            if v in c and c[v].constant_value() is not None:
                r = r - q.scale(c[v].constant_value())
            new.append((u, r))
        pivots = new + [(v, q)]
    for v, q in pivots:
        solution[v] = -(q - Poly.var(v))
    return solution, leftovers


def _secondary_expr(theory: Theory, c: Constraint, ham: HamiltonianResult, scale):
    """Index form ``scale · (-δH_C/δq)`` for a primary ``Π_q ≈ 0``."""
    if ham.canonical is None or c.expr is None:
        return None
    syms = {f.symbol for t in c.expr.terms for f in t.factors}
    if len(c.expr.terms) != 1:
        return None
    for fs in theory.fields:
        if fs.momentum in syms:
            spec = theory.table.get(fs.field)
            split = "0" if any(s.label == "0" for t in c.expr.terms for f in t.factors for s in f.slots) else ""
            ftxt, _, _ = field_template(spec, split)
            d = abstract_functional_derivative(ham.canonical, f"{fs.field}[{ftxt}]", theory.table)
            return canonicalize(d.scale(-Fraction(scale)), theory.table)
    return None


def consistency_evolution(theory: Theory, prim: PrimaryResult, ham: HamiltonianResult,
                          max_rounds: int = 4) -> ConsistencyResult:
    """Evolve every constraint with ``H_P`` until no new constraints appear.

    Each round computes ``{C(x), H_P}`` for the newest constraints, reduces on
    the current surface and solves constant-pivot rows for multipliers.  A
    family whose conditions carry no multiplier yields a secondary family;
    what remains after all multipliers are fixed must vanish weakly.
    """
    ps = theory.ps
    names = set(ham.multipliers.values())
    hp = ham.primary_poly
    constraints = list(prim.primaries)
    secondaries: list = []
    conditions: dict = {}
    mult = MultiplierSolution(names=tuple(sorted(names)))
    todo = list(prim.primaries)
    all_rows: list = []
    tertiary: list = []
    rounds = 0
    while todo and rounds < max_rounds:
        rounds += 1
        new_rows = []
        for c in todo:
            conds = {}
            for comps, p in c.items():
                conds[comps] = local_bracket(p, hp, ps)
                new_rows.append(((c.name, comps), conds[comps]))
            conditions[c.name] = conds
        all_rows.extend(new_rows)
        surf = Surface(ps, [p for k in constraints for _, p in k.items()])
        sol, left = _solve_conditions([(k, mult.substitute(p)) for k, p in all_rows], names, surf)
        mult.solved.update(sol)
        # families whose condition rows are all leftovers and multiplier-free give secondaries
        left_keys = {k for k, _ in left}
        todo = []
        for c in [k for k in constraints if k.name in conditions]:
            rows = [(c.name, comps) for comps in c.components]
            if not all(r in left_keys for r in rows):
                continue
            vals = {k: p for k, p in left if k[0] == c.name}
            residual = {k[1]: surf.reduce(mult.substitute(p)) for k, p in vals.items()}
            if not any(residual.values()):
                continue
            if any(v[0] in names for p in residual.values() for v in p.variables()):
                continue
            if any(s.origin == f"evolution of {c.name}" for s in secondaries):
                continue
            sname, scale = theory.secondary_names.get(c.name, (f"sec{c.name}", 1))
            comps_poly = {k: conditions[c.name][k].scale(scale) for k in c.components}
            expr = _secondary_expr(theory, c, ham, scale)
            if expr is not None:
                check = constraint_from_expr(sname, expr, theory.table, theory.backend)
                if set(check.components) == set(comps_poly) and all(
                        not surf.reduce(check.components[k] - comps_poly[k]) for k in comps_poly):
                    comps_poly = check.components
                else:
                    expr = None
            sec = Constraint(sname, comps_poly, c.free, c.antisym, expr, pedigree=SECONDARY,
                             origin=f"evolution of {c.name}")
            secondaries.append(sec)
            constraints.append(sec)
            todo.append(sec)
        if not todo:
            # leftovers that are not absorbed by a new family must vanish on the surface
            surf = Surface(ps, [p for k in constraints for _, p in k.items()])
            for k, p in left:
                r = surf.reduce(mult.substitute(p))
                if r and not any(v[0] in names for v in r.variables()):
                    tertiary.append((k, r))
    free = sorted({base(v) for _, p in all_rows for v in mult.substitute(p).variables()
                   if v[0] in names and base(v) not in mult.solved})
    mult.free = free
    return ConsistencyResult(list(prim.primaries), secondaries, mult, conditions, rounds, tertiary)


def proportionality(pairs, surface: Surface | None = None):
    """Common constant ``k`` with ``a ≈ k b`` for all ``(a, b)`` pairs, or ``None``.

    Pairs where both sides vanish are skipped; ``k`` is ``None`` if no pair fixes it.
    """
    k = None
    for a, b in pairs:
        if surface is not None:
            a, b = surface.reduce(a), surface.reduce(b)
        if not b:
            if a:
                return None
            continue
        m = max(b.terms)
        kk = Fraction(a.terms.get(m, 0)) / b.terms[m]
        if a != b.scale(kk):
            return None
        if k is None:
            k = kk
        elif k != kk:
            return None
    return k


def _bind(x, table, backend, keys):
    from ..phase_space import param_signature
    from ..tensor.components import to_poly

    free = [s.label for s in param_signature(x)]
    return [(k, to_poly(x, table, backend, dict(zip(free, k)))) for k in keys]


def relation_factor(result: ConsistencyResult, family: str, relation, theory: Theory):
    """Factor ``k`` with ``{C, H_P} ≈ k · relation`` componentwise (``relation`` written as ``lhs - rhs``)."""
    conds = result.conditions[family]
    surf = Surface(theory.ps, [p for c in result.constraints for _, p in c.items()])
    rel = dict(_bind(relation, theory.table, theory.backend, sorted(conds)))
    return proportionality([(conds[k], rel[k]) for k in sorted(conds)], surf)


def solution_factor(result: ConsistencyResult, name: str, form, theory: Theory):
    """Factor ``k`` with ``solved λ ≈ k · form`` for the multiplier family ``name``."""
    sol = result.multipliers.for_family(name)
    if not sol:
        return None
    surf = Surface(theory.ps, [p for c in result.constraints for _, p in c.items()])
    keys = sorted(v[1] for v in sol)
    ref = dict(_bind(form, theory.table, theory.backend, keys))
    return proportionality([(sol[(name, k, ())], ref[k]) for k in keys], surf)


__all__ = [
    "ConsistencyResult",
    "MultiplierSolution",
    "consistency_evolution",
    "proportionality",
    "relation_factor",
    "solution_factor",
]
