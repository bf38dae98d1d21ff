"""Component expansion of indexed expressions and exact numeric evaluation."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from ..poly import LAM, Poly, jet
from .expr import Expr, TensorFactor, Term, expand_covariant
from .symbols import COV_TIME, INTERNAL, NUMERIC, RANGES, UP, SymbolTable


class ComponentError(ValueError):
    pass


def _perm_sign(seq) -> int:
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
            elif seq[i] == seq[j]:
                return 0
    return s


def canonical_component(spec, comps: tuple) -> tuple[int, tuple]:
    """Sort antisymmetric/symmetric groups of a component tuple; sign 0 if it vanishes."""
    comps = list(comps)
    sign = 1
    for g in spec.antisym:
        sub = [comps[i] for i in g]
        s = _perm_sign(sub)
        if s == 0:
            return 0, tuple(comps)
        sign *= s
        for pos, v in zip(g, sorted(sub)):
            comps[pos] = v
    for g in spec.sym:
        sub = sorted(comps[i] for i in g)
        for pos, v in zip(g, sub):
            comps[pos] = v
    return sign, tuple(comps)


def independent_components(spec) -> list[tuple]:
    """Independent component tuples of a symbol (one per antisymmetric orbit)."""


    ranges = [RANGES[k] if k != "any" else (0, 1, 2) for k, _ in spec.slots]
    out = []
    for c in itertools.product(*ranges):
        s, cc = canonical_component(spec, c)
        if s != 0 and cc == c:
            out.append(c)
    return out


def _numeric_value(f: TensorFactor, vals: tuple, backend) -> Fraction:
    name = f.symbol
    variances = "".join(s.variance for s in f.slots)
    if name == "epsI":
        return backend.eps(variances)[vals]
    if name == "eps0":
        a, b = vals
        if 0 in (a, b):
            return Fraction(0)
        return Fraction(_perm_sign((a, b)))
    if name == "eta":
        if variances == "__":
            return backend.eta[vals]
        if variances == "^^":
            return backend.eta_inv[vals]
        return Fraction(int(vals[0] == vals[1]))
    if name == "delta":
        return Fraction(int(vals[0] == vals[1]))
    raise ComponentError(f"no numeric values for {name!r}")


def _deriv_direction(d, v: int) -> int:
    if d.op == "D":
        if v != 0:
            raise ComponentError("opaque covariant derivative is only defined along time")
        return COV_TIME
    return v


def _field_component(f: TensorFactor, vals: tuple, dvals: tuple, spec, backend) -> Poly:
    """Component of a field factor as a polynomial (η handles non-default internal variance)."""


    # positions whose variance differs from the stored default on an internal slot
    flips = [i for i, (s, (kind, dv)) in enumerate(zip(f.slots, spec.slots))
             if kind == INTERNAL and s.variance != dv]
    directions = tuple(_deriv_direction(d, v) for d, v in zip(f.derivs, dvals))
    out = Poly()
    for inner in itertools.product(range(3), repeat=len(flips)):
        coeff = Fraction(1)
        comps = list(vals)
        for pos, w in zip(flips, inner):
            metric = backend.eta_inv if f.slots[pos].variance == UP else backend.eta
            c = metric[vals[pos], w]
            coeff *= c
            if not coeff:
                break
            comps[pos] = w
        if not coeff:
            continue
        sign, canon = canonical_component(spec, tuple(comps))
        if sign == 0:
            continue
        out = out + Poly.var(jet(f.symbol, canon, directions), coeff * sign)
    return out


def _label_range(kind: str) -> tuple:
    return RANGES[kind]


def term_to_poly(t: Term, table: SymbolTable, backend, bindings: Mapping[str, int]) -> Poly:
    census = t.label_census()
    free_unbound = [lab for lab, occ in census.items() if len(occ) == 1 and lab not in bindings]
    if free_unbound:
        raise ComponentError(f"free index {free_unbound[0]!r} has no value")
    kinds = {lab: occ[0].kind for lab, occ in census.items()}
    # numeric factors first, so that vanishing ε components prune early
    order = sorted(range(len(t.factors)),
                   key=lambda i: (table.get(t.factors[i].symbol).role != NUMERIC, i))
    factors = [t.factors[i] for i in order]
    base = Poly({((LAM,) * t.lam): t.coeff})
    result: dict = {}

    def labels_of(f):
        return [s.label for s in f.slots] + [d.slot.label for d in f.derivs]

    def value(lab, env):
        if lab.isdigit():
            return int(lab)
        return env[lab]

    def rec(k: int, env: dict, acc: Poly):
        if k == len(factors):
            for m, c in acc.terms.items():
                v = result.get(m, 0) + c
                if v:
                    result[m] = v
                else:
                    result.pop(m, None)
            return
        f = factors[k]
        new = []
        for lab in labels_of(f):
            if not lab.isdigit() and lab not in env and lab not in new:
                new.append(lab)


        for combo in itertools.product(*(_label_range(kinds[lab]) for lab in new)):
            env2 = dict(env)
            env2.update(zip(new, combo))
            vals = tuple(value(s.label, env2) for s in f.slots)
            spec = table.get(f.symbol)
            if spec.role == NUMERIC:
                c = _numeric_value(f, vals, backend)
                if not c:
                    continue
                rec(k + 1, env2, acc.scale(c))
            else:
                dvals = tuple(value(d.slot.label, env2) for d in f.derivs)
                comp = _field_component(f, vals, dvals, spec, backend)
                if not comp:
                    continue
                rec(k + 1, env2, acc * comp)

    rec(0, {lab: v for lab, v in bindings.items()}, base)
    return Poly(result)


def to_poly(x: Expr, table: SymbolTable, backend, bindings: Mapping[str, int] | None = None) -> Poly:
    """Expand ``x`` into components: a polynomial in jet variables.

    ``bindings`` assigns concrete values to the free labels of ``x``.
    """
    bindings = dict(bindings or {})
    x = expand_covariant(x, table)
    out = Poly()
    for t in x.terms:
        out = out + term_to_poly(t, table, backend, bindings)
    return out


def component_table(x: Expr, table: SymbolTable, backend) -> dict:
    """All components of ``x`` keyed by free-index value tuples (labels sorted)."""


    free = sorted(x.free_indices(), key=lambda s: s.label)
    out = {}
    for vals in itertools.product(*(RANGES[s.kind] for s in free)):
        out[vals] = to_poly(x, table, backend, dict(zip((s.label for s in free), vals)))
    return out


def normalize_assignment(assignment: Mapping, table: SymbolTable) -> dict:
    """Canonicalize assignment keys, rejecting values that violate declared antisymmetry."""
    out: dict = {}
    for key, val in assignment.items():
        if key == "Lam" or (isinstance(key, tuple) and key and key[0] == "Lam"):
            continue
        name, comps = key[0], tuple(key[1])
        derivs = tuple(sorted(key[2])) if len(key) > 2 else ()
        spec = table.get(name)
        sign, canon = canonical_component(spec, comps)
        val = Fraction(val)
        if sign == 0:
            if val != 0:
                raise ComponentError(f"{name}{list(comps)} must vanish by antisymmetry")
            continue
        k = (name, canon, derivs)
        v = val * sign
        if k in out and out[k] != v:
            raise ComponentError(f"assignment for {name}{list(comps)} violates declared antisymmetry")
        out[k] = v
    return out


def numeric_eval(x: Expr, assignment: Mapping, lambda_value, table: SymbolTable, backend,
                 bindings: Mapping[str, int] | None = None) -> Fraction:
    """Exact value of ``x`` at a point given component values of every symbol."""
    values = normalize_assignment(assignment, table)
    values[LAM] = Fraction(lambda_value)
    p = to_poly(x, table, backend, bindings)

    def get(v):
        if v in values:
            return values[v]
        raise ComponentError(f"missing component {v[0]}{list(v[1])}" + (f" d{list(v[2])}" if v[2] else ""))

    return p.evaluate(get)


__all__ = [
    "ComponentError",
    "canonical_component",
    "component_table",
    "independent_components",
    "numeric_eval",
    "to_poly",
]
