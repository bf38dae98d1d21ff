"""First/second-class classification and the degree-of-freedom count."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..phase_space import PhaseSpaceRegistry, local_bracket, params_in
from ..poly import Poly, euler
from ..theories import Theory
from .constraints import FIRST, PRIMARY, SECOND, Constraint, Surface, background_point
from .linalg import inverse
from .matrix import ComponentKernel, component_kernel, numeric_rank_nullspace
from .momenta import PipelineError


@dataclass
class SecondClassBlock:
    """Components ``χ_α`` of the second-class set with ``C_αβ = {χ_α, χ_β}`` and its inverse."""

    labels: list
    polys: list
    C: list
    Cinv: list
    surface: Surface | None = None

    def correction(self, p: Poly, ps: PhaseSpaceRegistry) -> Poly:
        """``Σ {p, χ_α} C^{αβ} χ_β`` as a local density.

        The bracket coefficients are reduced on the second-class surface
        first, which only changes the result at second order in ``χ``.
        """
        g = Poly()
        for i, q in enumerate(self.polys):
            g = g + Poly.var(("t", (i,), ())) * q
        br = local_bracket(p, g, ps)
        if self.surface is not None:
            br = self.surface.reduce(br)
        combos = []
        for i in range(len(self.polys)):
            acc = Poly()
            for j, q in enumerate(self.polys):
                if self.Cinv[i][j]:
                    acc = acc + q.scale(self.Cinv[i][j])
            combos.append(acc)

        def sub(v):
            if v[0] != "t":
                return None
            c = combos[v[1][0]]
            return c.derivative(v[2]) if v[2] else c
        return br.substitute(sub)


def second_class_block(chis, ps: PhaseSpaceRegistry) -> SecondClassBlock:
    """Assemble ``C`` for the second-class set; it must be a constant ultralocal matrix."""
    kern = component_kernel(chis, ps)
    n = kern.size
    C = []
    for i in range(n):
        row = []
        for j in range(n):
            e = kern.kernel[i][j]
            if any(d for d in e if d and e[d]):
                raise PipelineError("classify", "second-class matrix contains derivatives; not supported")
            v = e.get((), Poly())
            c = v.constant_value() if v else Fraction(0)
            if c is None:
                raise PipelineError("classify", "second-class matrix depends on the fields; not supported")
            row.append(c)
        C.append(row)
    try:
        Cinv = inverse(C)
    except ZeroDivisionError:
        raise PipelineError("classify", "second-class matrix is singular") from None
    polys = [p for c in chis for _, p in c.items()]
    return SecondClassBlock(kern.labels, polys, C, Cinv, Surface(ps, polys))


@dataclass
class ClassificationResult:
    first_class: list
    second_class: list
    block: SecondClassBlock
    rank: int
    origin: dict = field(default_factory=dict)       # first-class name -> family it completes
    closure: dict = field(default_factory=dict)      # (gamma, constraint) -> verdict
    known: dict = field(default_factory=dict)        # name -> "exact" | "weak" | "residual"

    @property
    def constraints(self) -> list:
        return list(self.first_class) + list(self.second_class)

    def family(self, name: str) -> Constraint:
        return next(c for c in self.constraints if c.name == name)


def _monomial_score(c: Constraint) -> int:
    return sum(len(p.terms) > 1 for _, p in c.items())


def choose_second_class(constraints, ps: PhaseSpaceRegistry, rank: int, seed: int = 0, samples: int = 8):
    """Subset of families with total size ``rank`` whose kernel block has full rank.

    Candidates are tried in order of preference: fewest secondaries, then
    fewest multi-term components (so bare momenta and simple primaries win).
    """
    fams = list(constraints)
    cands = []
    for k in range(1, len(fams) + 1):
        for sub in itertools.combinations(fams, k):
            if sum(c.size for c in sub) != rank:
                continue
            key = (sum(c.pedigree != PRIMARY for c in sub), sum(_monomial_score(c) for c in sub),
                   [c.name for c in sub])
            cands.append((key, sub))
    cands.sort(key=lambda kv: kv[0])
    for _, sub in cands:
        res = numeric_rank_nullspace(list(sub), ps, samples=samples, seed=seed, surface_constraints=fams)
        if res.rank == rank:
            return list(sub)
    raise PipelineError("classify", "no subset of constraint families forms an invertible second-class block")


def first_class_check(gamma: Constraint, constraints, ps: PhaseSpaceRegistry, surface: Surface) -> dict:
    """Weak vanishing of ``{γ_c(x), ∫s·C}`` for every family ``C``: name -> residual polynomial."""
    out = {}
    for c in constraints:
        g = c.smeared("s2")
        res = Poly()
        for comps, p in gamma.items():
            r = surface.reduce(local_bracket(p, g, ps))
            if r:
                res = res + Poly.var(("s1", comps, ())) * r
        out[c.name] = res
    return out


def classify_constraints(theory: Theory, constraints, rank: int, seed: int = 0,
                         known_forms: dict | None = None) -> ClassificationResult:
    """Split the constraint set into first and second class.

    The second-class set is the preferred invertible block; every other
    family ``F`` is completed to ``γ = F - {F, χ_α} C^{αβ} χ_β``, which
    commutes weakly with all χ, and then checked against every constraint.
    ``known_forms`` maps names to expected densities (component polynomials
    keyed like the family); a match attaches the form's index expression.
    """
    ps = theory.ps
    chis = choose_second_class(constraints, ps, rank, seed=seed)
    block = second_class_block(chis, ps)
    firsts, origin = [], {}
    for c in constraints:
        if c in chis:
            continue
        comps = {k: p - block.correction(p, ps) for k, p in c.items()}
        name = theory.first_class_names.get(c.name, "g" + c.name)
        origin[name] = c.name
        expr = c.expr if all(comps[k] == p for k, p in c.items()) else None
        firsts.append(Constraint(name, comps, c.free, c.antisym, expr, c.pedigree, FIRST, f"completion of {c.name}"))
    seconds = []
    for c in chis:
        name = theory.second_class_names.get(c.name, "x" + c.name)
        seconds.append(Constraint(name, dict(c.components), c.free, c.antisym, c.expr, c.pedigree, SECOND,
                                  f"second class {c.name}"))
    result = ClassificationResult(firsts, seconds, block, rank, origin)
    surf = Surface(ps, [p for c in constraints for _, p in c.items()])
    for g in firsts:
        for name, res in first_class_check(g, result.constraints, ps, surf).items():
            result.closure[(g.name, name)] = "weakly zero" if not res else "not certified"
            if res:
                raise PipelineError("classify", f"{g.name} is not first class: bracket with {name} survives")
    for name, (shown, expanded) in (known_forms or {}).items():
        try:
            fam = result.family(name)
        except StopIteration:
            continue
        verdict = compare_family(fam, expanded, theory, surf)
        result.known[name] = verdict
        if verdict == "exact" and fam.expr is None:
            fam.expr = shown
    return result


def compare_family(fam: Constraint, x, theory: Theory, surface: Surface | None = None) -> str:
    """``"exact"``, ``"weak"`` or ``"residual"`` for a family against an index expression."""
    from .consistency import _bind

    keys = sorted(fam.components)
    ref = dict(_bind(x, theory.table, theory.backend, keys))
    diffs = [fam.components[k] - ref[k] for k in keys]
    if not any(diffs):
        return "exact"
    if surface is not None and not any(surface.reduce(d) for d in diffs):
        return "weak"
    return "residual"


@dataclass
class DofCount:
    canonical: int
    first_class: int
    second_class: int
    reduced_dimension: int
    dof: Fraction
    full_canonical: int
    full_first_class: int
    full_second_class: int
    full_reduced_dimension: int
    full_dof: Fraction

    def table(self) -> list:
        return [
            ("counting", "canonical", "first-class", "second-class", "reduced phase space", "dof"),
            ("spacetime indices", self.canonical, self.first_class, self.second_class, self.reduced_dimension,
             self.dof),
            ("full multiplicity", self.full_canonical, self.full_first_class, self.full_second_class,
             self.full_reduced_dimension, self.full_dof),
        ]


def dof_formula(canonical: int, first: int, second: int) -> tuple[int, Fraction]:
    """Reduced phase-space dimension ``N - 2 FC - SC`` and ``dof`` = half of it."""
    red = canonical - 2 * first - second
    if red < 0:
        raise PipelineError("dof", f"negative reduced phase-space dimension {red}")
    return red, Fraction(red, 2)


def count_dof(classification: ClassificationResult | None, ps: PhaseSpaceRegistry) -> DofCount:
    fc = classification.first_class if classification else []
    sc = classification.second_class if classification else []
    n = ps.count(spacetime_only=True)
    nf = ps.count()
    f1 = sum(c.spacetime_count() for c in fc)
    s1 = sum(c.spacetime_count() for c in sc)
    f2 = sum(c.size for c in fc)
    s2 = sum(c.size for c in sc)
    r1, d1 = dof_formula(n, f1, s1)
    r2, d2 = dof_formula(nf, f2, s2)
    return DofCount(n, f1, s1, r1, d1, nf, f2, s2, r2, d2)


__all__ = [
    "ClassificationResult",
    "DofCount",
    "SecondClassBlock",
    "choose_second_class",
    "classify_constraints",
    "compare_family",
    "count_dof",
    "dof_formula",
    "first_class_check",
    "second_class_block",
]
