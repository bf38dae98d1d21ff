"""Sparse polynomials over the rationals in jet-space variables.

A jet variable is a plain tuple ``(name, comps, derivs)``:

* ``name``   symbol name (``"e"``, ``"PA"``, ``"Lam"``, a smearing parameter...)
* ``comps``  concrete component values, in the symbol's canonical slot order
* ``derivs`` sorted tuple of derivative directions (``0`` is a time derivative)

Monomials are sorted tuples of jet variables with repetition.  Every
variable except the cosmological constant depends on the spatial point,
so total derivatives act on all of them.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

LAM = ("Lam", (), ())
CONSTANT_NAMES = frozenset({"Lam"})

Var = tuple
Mono = tuple


def jet(name: str, comps=(), derivs=()) -> Var:
    return (name, tuple(comps), tuple(sorted(derivs)))


def base(var: Var) -> tuple:
    return var[0], var[1]


def deriv_order(var: Var) -> int:
    return len(var[2])


def with_derivs(var: Var, extra) -> Var:
    return (var[0], var[1], tuple(sorted(var[2] + tuple(extra))))


def _merge(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Poly:
    """Immutable-by-convention sparse polynomial ``{monomial: Fraction}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        self.terms: dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = _as_fraction(c)

    # -- construction ---------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c}) if c else cls()

    @classmethod
    def var(cls, v: Var, coeff=1) -> "Poly":
        return cls({(v,): coeff})

    @classmethod
    def from_mono(cls, mono: Mono, coeff=1) -> "Poly":
        return cls({tuple(sorted(mono)): coeff})

    # -- basic protocol -------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self, limit=8)})"

    def copy(self) -> "Poly":
        p = Poly()
        p.terms = dict(self.terms)
        return p

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly()
        p = Poly()
        p.terms = {m: v * c for m, v in self.terms.items()}
        return p

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _merge(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    # -- inspection -----------------------------------------------------
    def variables(self) -> set:
        out = set()
        for m in self.terms:
            out.update(m)
        return out

    def constant_value(self) -> Fraction | None:
        """The rational value if the polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def degree_in(self, pred: Callable[[Var], bool]) -> int:
        best = 0
        for m in self.terms:
            best = max(best, sum(1 for v in m if pred(v)))
        return best

    def coefficient(self, var: Var) -> "Poly":
        """Coefficient of ``var`` assuming the polynomial is linear in it."""
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            n = m.count(var)
            if n == 1:
                i = m.index(var)
                out[m[:i] + m[i + 1:]] = c
            elif n > 1:
                raise ValueError(f"polynomial not linear in {var}")
        return Poly(out)

    def split_by(self, pred: Callable[[Var], bool]) -> dict[Mono, "Poly"]:
        """Group terms by the sub-monomial of variables matching ``pred``."""
        groups: dict[Mono, dict] = {}
        for m, c in self.terms.items():
            key = tuple(v for v in m if pred(v))
            rest = tuple(v for v in m if not pred(v))
            groups.setdefault(key, {})[rest] = c
        return {k: Poly(v) for k, v in groups.items()}

    def filter(self, pred: Callable[[Mono], bool]) -> "Poly":
        return Poly({m: c for m, c in self.terms.items() if pred(m)})

    # -- calculus -------------------------------------------------------
    def diff(self, var: Var) -> "Poly":
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            n = m.count(var)
            if not n:
                continue
            i = m.index(var)
            rest = m[:i] + m[i + 1:]
            out[rest] = out.get(rest, 0) + c * n
        return Poly(out)

    def total_derivative(self, direction: int) -> "Poly":
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            seen = set()
            for i, v in enumerate(m):
                if v[0] in CONSTANT_NAMES or v in seen:
                    continue
                seen.add(v)
                n = m.count(v)
                rest = m[:i] + m[i + 1:]
                nm = tuple(sorted(rest + (with_derivs(v, (direction,)),)))
                out[nm] = out.get(nm, 0) + c * n
        return Poly(out)

    def derivative(self, directions: Iterable[int]) -> "Poly":
        p = self
        for d in directions:
            p = p.total_derivative(d)
        return p

    def truncate_lambda(self) -> "Poly":
        """Drop every term carrying a positive power of the cosmological constant."""
        return Poly({m: c for m, c in self.terms.items() if LAM not in m})

    def lambda_grading(self) -> set[int]:
        return {m.count(LAM) for m in self.terms}

    # -- substitution / evaluation -------------------------------------
    def substitute(self, mapping: Callable[[Var], "Poly | None"] | Mapping) -> "Poly":
        lookup = mapping.get if isinstance(mapping, Mapping) else mapping
        cache: dict[Var, Poly | None] = {}
        out = Poly()
        acc: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            kept = []
            factor = None
            for v in m:
                if v not in cache:
                    cache[v] = lookup(v)
                r = cache[v]
                if r is None:
                    kept.append(v)
                else:
                    factor = r if factor is None else factor * r
            if factor is None:
                acc[m] = acc.get(m, 0) + c
            else:
                piece = factor * Poly.from_mono(tuple(kept), c)
                for mm, cc in piece.terms.items():
                    acc[mm] = acc.get(mm, 0) + cc
        out.terms = {m: c for m, c in acc.items() if c}
        return out

    def evaluate(self, values: Mapping[Var, Fraction] | Callable[[Var], Fraction]) -> Fraction:
        get = values.get if isinstance(values, Mapping) else values
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v in m:
                x = get(v)
                if x is None:
                    raise KeyError(f"no value for {format_var(v)}")
                t *= x
                if not t:
                    break
            total += t
        return total

    def rename(self, fn: Callable[[Var], Var]) -> "Poly":
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            nm = tuple(sorted(fn(v) for v in m))
            out[nm] = out.get(nm, 0) + c
        return Poly(out)


def euler(p: Poly, var_base: tuple, dims=(1, 2)) -> Poly:
    """Euler operator: variational derivative of ``∫p`` w.r.t. the field ``var_base``.

    ``var_base`` is ``(name, comps)``.  Boundary terms are dropped.
    """
    name, comps = var_base
    jets = sorted({v for v in p.variables() if v[0] == name and v[1] == comps})
    out = Poly()
    for v in jets:
        term = p.diff(v)
        for d in v[2]:
            term = -term.total_derivative(d)
        out = out + term
    return out


def is_divergence(p: Poly) -> bool:
    """True iff ``p`` is a total spatial divergence (all Euler derivatives vanish)."""
    bases = {base(v) for v in p.variables() if v[0] not in CONSTANT_NAMES}
    for b in sorted(bases):
        if euler(p, b):
            return False
    return True


def format_var(v: Var) -> str:
    name, comps, derivs = v
    s = name
    if comps:
        s += "[" + ",".join(str(c) for c in comps) + "]"
    if derivs:
        s = "d" + "".join(str(d) for d in derivs) + "(" + s + ")"
    return s


def format_poly(p: Poly, limit: int | None = None) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, (m, c) in enumerate(sorted(p.terms.items())):
        if limit is not None and i >= limit:
            parts.append(f"... ({len(p.terms) - limit} more)")
            break
        body = "*".join(format_var(v) for v in m)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts)
