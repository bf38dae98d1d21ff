"""Constraint families, the constraint surface and weak reduction."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..phase_space import PhaseSpaceRegistry, _antisym_pairs, param_signature
from ..poly import CONSTANT_NAMES, LAM, Poly, base, format_poly, with_derivs
from ..tensor.components import to_poly
from ..tensor.expr import Expr, render
from ..tensor.symbols import INTERNAL, PARAM, RANGES, SPACETIME, SPATIAL, TIME, UP, DOWN, SymbolSpec

PRIMARY, SECONDARY = "primary", "secondary"
FIRST, SECOND, UNCLASSIFIED = "first", "second", "unclassified"


@dataclass
class Constraint:
    """A constraint family: one local density per independent component.

    ``free`` are the free index slots (sorted by label) and ``components``
    maps value tuples for them to component densities.
    """

    name: str
    components: dict
    free: tuple = ()
    antisym: tuple = ()
    expr: Expr | None = None
    pedigree: str = PRIMARY
    klass: str = UNCLASSIFIED
    origin: str = ""

    @property
    def size(self) -> int:
        return len(self.components)

    def spacetime_count(self) -> int:
        n = 1
        for s in self.free:
            if s.kind in (SPATIAL,):
                n *= 2
            elif s.kind == SPACETIME:
                n *= 3
        return n

    def internal_multiplicity(self) -> int:
        return self.size // self.spacetime_count()

    def items(self):
        return sorted(self.components.items())

    def weight(self, comps) -> int:
        """Number of index tuples represented by an independent component."""
        w = 1
        for g in self.antisym:
            w *= len(list(itertools.permutations(g)))
        return w

    def smeared(self, param: str) -> Poly:
        """``Σ s_c C_c`` over all index values (antisymmetric pairs counted twice)."""
        out = Poly()
        for comps, dens in self.items():
            out = out + Poly.var((param, comps, ())) * dens.scale(self.weight(comps))
        return out

    def param_spec(self, param: str) -> SymbolSpec:
        slots = tuple((INTERNAL if s.kind == INTERNAL else SPACETIME, UP if s.variance == DOWN else DOWN)
                      for s in self.free)
        return SymbolSpec(param, slots, antisym=self.antisym, role=PARAM)

    def render(self) -> str:
        return render(self.expr) if self.expr is not None else f"<{self.size} component densities>"

    def scaled(self, c, name=None) -> "Constraint":
        c = Fraction(c)
        return Constraint(name or self.name, {k: v.scale(c) for k, v in self.components.items()},
                          self.free, self.antisym, self.expr.scale(c) if self.expr is not None else None,
                          self.pedigree, self.klass, self.origin)


def independent_values(free, antisym) -> list[tuple]:
    out = []
    for vals in itertools.product(*(RANGES[s.kind] for s in free)):
        ok = True
        for g in antisym:
            sub = [vals[i] for i in g]
            if sub != sorted(sub) or len(set(sub)) < len(sub):
                ok = False
        if ok:
            out.append(vals)
    return out


def constraint_from_expr(name: str, x: Expr, table, backend, **kw) -> Constraint:
    free = tuple(param_signature(x))
    antisym = tuple(tuple(g) for g in _antisym_pairs(x, list(free), table))
    comps = {}
    for vals in independent_values(free, antisym):
        comps[vals] = to_poly(x, table, backend, dict(zip((s.label for s in free), vals)))
    return Constraint(name, comps, free, antisym, x, **kw)


# ---------------------------------------------------------------------------
# constraint surface

class Surface:
    """Sequential linear solution of constraint components for canonical variables.

    Each component is reduced by the solutions so far and solved for a
    variable that occurs linearly with a constant coefficient (undifferentiated
    momenta first, then the highest derivative order).  Derivatives of solved
    variables are replaced by total derivatives of their solutions.
    """

    def __init__(self, ps: PhaseSpaceRegistry, polys=(), prefer_momenta: bool = True):
        self.ps = ps
        self.sol: dict = {}
        self.by_base: dict = {}
        self.prefer_momenta = prefer_momenta
        self.dependent = 0
        self.unsolvable: list = []
        self._memo: dict = {}
        for p in polys:
            self.add(p)

    def _solvable_vars(self, p: Poly):
        names = self.ps.canonical_names()
        cands = []
        for v in p.variables():
            if v[0] not in names:
                continue
            try:
                coeff = p.coefficient(v)
            except ValueError:
                continue
            c = coeff.constant_value()
            if c is None or c == 0:
                continue
            if p.diff(v).diff(v):
                continue
            mom = v[0] in self.ps.momentum_names() and not v[2]
            key = (0 if (mom and self.prefer_momenta) else 1, -len(v[2]), v)
            cands.append((key, v, c))
        cands.sort()
        return cands

    def add(self, p: Poly) -> bool:
        r = self.reduce(p)
        if not r:
            self.dependent += 1
            return False
        cands = self._solvable_vars(r)
        if not cands:
            self.unsolvable.append(r)
            return False
        _, v, c = cands[0]
        rest = r - Poly.var(v).scale(c)
        self.sol[v] = rest.scale(-1 / c)
        self.by_base.setdefault(base(v), []).append(v)
        self._memo.clear()
        return True

    def _red_var(self, u, depth=0):
        if u in self._memo:
            return self._memo[u]
        if depth > 60:
            raise RecursionError("surface reduction does not terminate")
        r = None
        if u in self.sol:
            r = self._reduce(self.sol[u], depth + 1)
        else:
            for v in self.by_base.get(base(u), ()):
                extra = list(u[2])
                ok = True
                for d in v[2]:
                    if d in extra:
                        extra.remove(d)
                    else:
                        ok = False
                        break
                if ok and extra:
                    r = self._reduce(self.sol[v].derivative(extra), depth + 1)
                    break
        self._memo[u] = r
        return r

    def _reduce(self, p: Poly, depth=0) -> Poly:
        return p.substitute(lambda u: self._red_var(u, depth))

    def reduce(self, p: Poly) -> Poly:
        return self._reduce(p)

    @property
    def rank(self) -> int:
        return len(self.sol)


# ---------------------------------------------------------------------------
# weak reduction by linear matching

@dataclass
class WeakResult:
    residual: Poly
    coefficients: dict = field(default_factory=dict)
    surface_zero: bool | None = None

    @property
    def certified(self) -> bool:
        return not self.residual

    @property
    def verdict(self) -> str:
        if not self.residual:
            return "weakly zero"
        if self.surface_zero:
            return "weakly zero (surface substitution)"
        return "not certified"


def _divides(s, t) -> tuple | None:
    rest = list(t)
    for v in s:
        if v in rest:
            rest.remove(v)
        else:
            return None
    return tuple(rest)


def generators(constraints, deriv_orders=(0, 1), dims=(1, 2)) -> list[tuple[str, Poly]]:
    """Constraint components and their spatial derivatives as labelled polynomials."""
    out = []
    for c in constraints:
        for comps, p in c.items():
            out.append((f"{c.name}{list(comps)}", p))
            if 1 in deriv_orders:
                for d in dims:
                    out.append((f"d{d}({c.name}{list(comps)})", p.total_derivative(d)))
            if 2 in deriv_orders:
                for d1, d2 in itertools.combinations_with_replacement(dims, 2):
                    out.append((f"d{d1}{d2}({c.name}{list(comps)})", p.derivative((d1, d2))))
    return out


def _echelon_reduce(target: Poly, rows: list[tuple[object, Poly]]):
    """Gaussian elimination: residual of ``target`` modulo span(rows), with coefficients."""
    pivots: dict = {}  # leading monomial -> (poly, combo)
    order = lambda m: (len(m), m)  # noqa: E731

    def reduce(p: Poly, combo: dict):
        p = p.copy()
        combo = dict(combo)
        while p.terms:
            lead = max(p.terms, key=order)
            if lead not in pivots:
                return p, combo, lead
            q, qc = pivots[lead]
            f = p.terms[lead] / q.terms[lead]
            p = p - q.scale(f)
            for k, v in qc.items():
                combo[k] = combo.get(k, 0) - f * v
        return p, combo, None

    for key, row in rows:
        r, combo, lead = reduce(row, {key: Fraction(1)})
        if lead is not None:
            pivots[lead] = (r, combo)
    # reduce target fully (not just leading terms)
    p = target.copy()
    combo: dict = {}
    residual = Poly()
    while p.terms:
        lead = max(p.terms, key=order)
        if lead in pivots:
            q, qc = pivots[lead]
            f = p.terms[lead] / q.terms[lead]
            p = p - q.scale(f)
            for k, v in qc.items():
                combo[k] = combo.get(k, 0) + f * v
        else:
            residual = residual + Poly({lead: p.terms[lead]})
            p = p - Poly({lead: p.terms[lead]})
    return residual, {k: v for k, v in combo.items() if v}


def weak_reduce(x: Poly, constraints, rounds: int = 2, deriv_orders=(0, 1), surface: Surface | None = None,
                max_candidates: int = 20000) -> WeakResult:
    """Write ``x = Σ m_i g_i + residual`` with monomial multipliers ``m_i``.

    Generators ``g`` are constraint components and their first spatial
    derivatives.  Candidate multipliers are monomial quotients ``t/s`` with
    ``t`` a monomial of the current target set and ``s`` a monomial of
    ``g``; the residual is the normal form modulo their span.  A nonzero
    residual means "not certified", not "certified nonzero".
    """
    if not x:
        return WeakResult(Poly(), {}, True)
    gens = generators(constraints, deriv_orders)
    gens = [(k, g) for k, g in gens if g]
    monos = set(x.terms)
    cands: dict = {}
    residual, coeffs = x, {}
    for _ in range(rounds):
        for gk, g in gens:
            gm = list(g.terms)
            for t in list(monos):
                for s in gm:
                    m = _divides(s, t)
                    if m is not None and (gk, m) not in cands:
                        cands[(gk, m)] = g * Poly({m: 1})
        if len(cands) > max_candidates:
            break
        rows = sorted(cands.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        residual, coeffs = _echelon_reduce(x, rows)
        if not residual:
            break
        new = set()
        for r in cands.values():
            new.update(r.terms)
        new.update(residual.terms)
        if new <= monos:
            break
        monos = new
    surf = None
    if residual and surface is not None:
        surf = not surface.reduce(x)
    return WeakResult(residual, coeffs, surf if residual else True)


def random_point(variables, rng: random.Random, lam=None) -> dict:
    out = {}
    for v in sorted(variables):
        if v == LAM:
            out[v] = Fraction(lam) if lam is not None else Fraction(rng.choice([1, 2, 3, -1, -2])) / rng.randint(1, 3)
        else:
            out[v] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return out


def _linear_set(hard, variables, rng) -> list:
    """A random maximal set of variables in which every equation is at most linear."""
    order = list(variables)
    rng.shuffle(order)
    chosen: set = set()
    for v in order:
        trial = chosen | {v}
        if all(sum(1 for u in m if u in trial) <= 1 for h in hard for m in h.terms):
            chosen = trial
    return sorted(chosen)


def background_point(polys, ps: PhaseSpaceRegistry, rng: random.Random, lam=None, tries: int = 40):
    """Exact rational point of a constant background on the constraint surface.

    Every derivative jet variable is zero, so the frozen-coefficient symbol
    of a composition of local operators equals the product of symbols.  The
    constraints are first solved linearly for canonical variables; what is
    left is made linear by fixing a random subset of variables and solved
    exactly for the rest.  Returns a function ``value(var)`` or ``None``.
    """
    from .linalg import row_reduce

    def zero(v):
        return Poly() if v[2] else None

    eqs = [q for q in (p.substitute(zero) for p in polys) if q]
    surf = Surface(ps, eqs)
    hard = [h for h in (surf.reduce(e) for e in eqs) if h]
    hvars = sorted({v for h in hard for v in h.variables()} - {LAM})
    for _ in range(tries):
        fixed = {}
        if any(LAM in h.variables() for h in hard) or lam is not None:
            fixed[LAM] = Fraction(lam) if lam is not None else Fraction(rng.choice([1, 2, 3, -1, -2]), rng.randint(1, 3))
        S = _linear_set(hard, hvars, rng) if hard else []
        for v in hvars:
            if v not in S:
                fixed[v] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        rows = []
        for h in hard:
            q = h.substitute(lambda v: Poly.const(fixed[v]) if v in fixed else None)
            row = [q.coefficient(v).constant_value() or Fraction(0) for v in S]
            rest = q.filter(lambda m: not any(v in S for v in m)).constant_value() or Fraction(0)
            rows.append(row + [-rest])
        if rows:
            m, piv = row_reduce(rows)
            if len(S) in piv:
                continue  # inconsistent
            sol = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for i, v in enumerate(S) if i not in piv}
            for r, c in enumerate(piv):
                val = m[r][-1] - sum(m[r][i] * sol[S[i]] for i in range(len(S)) if i not in piv)
                sol[S[c]] = val
            fixed.update(sol)
        memo = dict(fixed)

        def value(v, memo=memo):
            if v in memo:
                return memo[v]
            if v[2]:
                return Fraction(0)
            if v in surf.sol:
                val = surf.reduce(Poly.var(v)).evaluate(value)
            elif v == LAM:
                val = Fraction(lam) if lam is not None else Fraction(rng.choice([1, 2, 3, -1, -2]), rng.randint(1, 3))
            else:
                val = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            memo[v] = val
            return val

        if all(p.evaluate(value) == 0 for p in polys):
            return value
    return None


__all__ = [
    "Constraint",
    "background_point",
    "FIRST",
    "PRIMARY",
    "SECOND",
    "SECONDARY",
    "Surface",
    "UNCLASSIFIED",
    "WeakResult",
    "constraint_from_expr",
    "format_poly",
    "generators",
    "independent_values",
    "random_point",
    "weak_reduce",
]
