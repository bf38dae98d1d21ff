"""The constraint bracket matrix and its numeric rank."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..phase_space import PhaseSpaceRegistry, integrals_equal, local_bracket, params_in, poisson_bracket
from ..poly import LAM, Poly, euler
from .constraints import Surface, background_point, random_point
from .linalg import GaussRational, left_nullspace, rank as matrix_rank


@dataclass
class BracketMatrix:
    """Family-level bracket densities ``{∫s1·C_i, ∫s2·C_j}``."""

    constraints: list
    entries: dict
    ps: PhaseSpaceRegistry

    def names(self) -> list:
        return [c.name for c in self.constraints]

    def family(self, name: str):
        return next(c for c in self.constraints if c.name == name)

    def density(self, a: str, b: str) -> Poly:
        return self.entries[(a, b)]

    def is_zero(self, a: str, b: str) -> bool:
        return integrals_equal(self.entries[(a, b)], Poly(), ("s1",))

    def nonzero_pairs(self) -> list:
        return [(a, b) for (a, b) in self.entries if not self.is_zero(a, b)]

    def param_table(self, a: str, b: str, table):
        """``table`` extended with the smearing parameters of entry ``(a, b)``."""
        return table.with_params(self.family(a).param_spec("s1"), self.family(b).param_spec("s2"))


def assemble_bracket_matrix(constraints, ps: PhaseSpaceRegistry) -> BracketMatrix:
    entries = {}
    sm1 = {c.name: c.smeared("s1") for c in constraints}
    sm2 = {c.name: c.smeared("s2") for c in constraints}
    for c in constraints:
        for d in constraints:
            entries[(c.name, d.name)] = poisson_bracket(sm1[c.name], sm2[d.name], ps)
    return BracketMatrix(list(constraints), entries, ps)


def compare_density(got: Poly, expected: Poly, surface: Surface | None = None) -> tuple[str, Poly]:
    """``("exact" | "weak" | "residual", residual)`` for two bracket densities smeared in ``s1``."""
    d = got - expected
    if integrals_equal(d, Poly(), ("s1",)):
        return "exact", Poly()
    res = Poly()
    for b in sorted(params_in(d, ["s1"])):
        e = euler(d, b)
        if surface is not None:
            e = surface.reduce(e)
        res = res + Poly.var((b[0], b[1], ())) * e
    if not res:
        return "weak", Poly()
    return "residual", res


# ---------------------------------------------------------------------------
# numeric rank of the component kernel

@dataclass
class ComponentKernel:
    """``{C_α(x), C_β(y)} = Σ_J K_αβ^J(x) ∂^J δ`` as polynomial coefficients per derivative multi-index."""

    labels: list
    kernel: list          # kernel[α][β] = {derivs: Poly}
    families: list        # family name per row

    @property
    def size(self) -> int:
        return len(self.labels)


def component_kernel(constraints, ps: PhaseSpaceRegistry) -> ComponentKernel:
    labels, polys, fams = [], [], []
    for c in constraints:
        for comps, p in c.items():
            labels.append((c.name, comps))
            polys.append(p)
            fams.append(c.name)
    g = Poly()
    for i, p in enumerate(polys):
        g = g + Poly.var(("t", (i,), ())) * p
    kern = []
    for p in polys:
        br = local_bracket(p, g, ps)
        row = [dict() for _ in polys]
        for m, coeff in br.terms.items():
            ts = [v for v in m if v[0] == "t"]
            (t,) = ts
            rest = list(m)
            rest.remove(t)
            j = t[1][0]
            key = tuple(sorted(t[2]))
            row[j][key] = row[j].get(key, Poly()) + Poly.from_mono(tuple(rest), coeff)
        kern.append(row)
    return ComponentKernel(labels, kern, fams)


def _symbol_value(entry: dict, values: dict, k) -> GaussRational:
    total = GaussRational(0)
    for derivs, poly in entry.items():
        val = poly.evaluate(values)
        if not val:
            continue
        w = GaussRational(1)
        for d in derivs:
            w = w * GaussRational(0, k[d - 1])
        total = total + w * val
    return total


@dataclass
class RankResult:
    rank: int
    size: int
    samples: int
    null_dim: int
    null_vectors: list = field(default_factory=list)   # numeric left null vectors at the last sample
    multiplicity: int = 1

    @property
    def spacetime_rank(self) -> int:
        return self.rank // self.multiplicity

    @property
    def spacetime_null(self) -> int:
        return self.null_dim // self.multiplicity


def numeric_rank_nullspace(constraints, ps: PhaseSpaceRegistry, samples: int = 100, seed: int = 0,
                           surface: Surface | None = None, kernel: ComponentKernel | None = None,
                           points: str = "background", lam=None, surface_constraints=None) -> RankResult:
    """Maximum rank of the kernel symbol over random points of the constraint surface.

    Points are constant backgrounds on the surface (see ``background_point``):
    there the frozen-coefficient symbol is multiplicative, so an operator
    null vector stays a null vector of the sampled matrix.  Each sample also
    draws a rational wave vector.  ``points="generic"`` instead reduces on
    the surface and draws every remaining jet variable at random; that rank
    is only an upper bound when null vectors involve derivatives.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    kernel = kernel or component_kernel(constraints, ps)
    n = kernel.size
    polys = [p for c in (surface_constraints or constraints) for _, p in c.items()]
    rng = random.Random(seed)
    if points == "generic":
        surface = surface or Surface(ps, polys)
        red = [[{d: surface.reduce(p) for d, p in e.items()} for e in row] for row in kernel.kernel]
        variables = {v for row in red for e in row for p in e.values() for v in p.variables()}
    else:
        red = kernel.kernel
    best, null = 0, []
    for _ in range(samples):
        if points == "generic":
            vals = random_point(variables, rng, lam)
        else:
            vals = background_point(polys, ps, rng, lam)
            if vals is None:
                raise RuntimeError("no rational point found on the constraint surface")
        k = (Fraction(rng.randint(1, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        M = [[_symbol_value(red[i][j], vals, k) for j in range(n)] for i in range(n)]
        r = matrix_rank(M)
        if r >= best:
            best = r
            null = left_nullspace(M) if r < n else []
    mults = {c.internal_multiplicity() for c in constraints}
    mult = mults.pop() if len(mults) == 1 else 1
    return RankResult(best, n, samples, n - best, null, mult)


__all__ = [
    "BracketMatrix",
    "ComponentKernel",
    "RankResult",
    "assemble_bracket_matrix",
    "compare_density",
    "component_kernel",
    "numeric_rank_nullspace",
]
