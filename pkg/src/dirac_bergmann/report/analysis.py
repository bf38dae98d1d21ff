"""End-to-end analysis: run the constraint pipeline on a config and check fixtures."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from ..gauge import (
    CHAIN_RULES,
    COVARIANT_LAW,
    GaugeGenerator,
    castellani_generator,
    commutator_closes,
    compare_variation,
    deformed_algebra,
    jacobi_violation,
    lagrangian_invariance,
    law_components,
    law_table,
    substitute_params,
)
from ..phase_space import param_signature
from ..pipeline.classify import classify_constraints, compare_family, count_dof
from ..pipeline.closure import bracket_identity
from ..pipeline.consistency import consistency_evolution, relation_factor, solution_factor
from ..pipeline.constraints import Surface, constraint_from_expr, weak_reduce
from ..pipeline.dirac import dirac_bracket_fn, field_bracket
from ..pipeline.extended import calH_matches_canonical, extended_forms, hamilton_consistency
from ..pipeline.families import family_table, lower
from ..pipeline.fixtures import ADJOINT_PRINTED, REPRODUCED, RESIDUAL, SO21_ONLY, fixture_set
from ..pipeline.matrix import assemble_bracket_matrix, compare_density, numeric_rank_nullspace
from ..pipeline.momenta import PipelineError, build_hamiltonians, derive_momenta_and_primaries
from ..poly import Poly, is_divergence
from ..tensor.components import to_poly
from ..tensor.parser import parse_expr, parse_raw
from ..tensor.expr import render
from ..tensor.rewrite import MacroTable

SUPPRESSED = "suppressed"

CONVENTIONS = {
    "epsilon": "eps^{012} = +1 on internal indices; eps0^{ab} and eps0_{ab} are densities with eps0(1,2) = +1",
    "metric": "eta = diag(-1, 1, 1) for SO(2,1), the identity for SO(3)",
    "curvature": "F_ab^IJ = d_a A_b^IJ - d_b A_a^IJ + A_a^I_K A_b^KJ - A_b^I_K A_a^KJ",
    "covariant derivative": "D v^I = d v^I + A^I_M v^M; D_0 of a gauge parameter kept opaque",
    "pairs": "{e, Pe} = delta; {A^IJ, PA_KL} = 1/2 (delta delta - delta delta)",
    "dirac bracket": "{F,G}_D = {F,G} - {F,chi} C^-1 {chi,G}",
    "weak equality": "zero after linear elimination of constraint components and their derivatives",
}


@dataclass
class FixtureResult:
    id: str
    kind: str
    verdict: str          # reproduced | residual | suppressed
    outcome: str          # raw check outcome, e.g. "exact", "weak", "residual", "factor 2"
    expect: str
    criterion: int = 0
    note: str = ""
    statement: str = ""
    latex: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        del d["seconds"]         # timings would break byte-identical reports
        return d


@dataclass
class AnalysisReport:
    """Plain-data report; every value is a str, int, list or dict so it serialises losslessly."""

    theory: str
    backend: str
    lam_mode: str
    seed: int
    conventions: dict = field(default_factory=dict)
    stages: dict = field(default_factory=dict)
    fixtures: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def residuals(self) -> list:
        return [f for f in self.fixtures if f["verdict"] == RESIDUAL]

    @property
    def exit_code(self) -> int:
        return 2 if self.residuals or self.errors else 0

    def fixture(self, fid: str) -> dict:
        return next(f for f in self.fixtures if f["id"] == fid)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("theory", "backend", "lam_mode", "seed", "conventions", "stages",
                                              "fixtures", "errors")}

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        return cls(**{k: d[k] for k in ("theory", "backend", "lam_mode", "seed", "conventions", "stages",
                                        "fixtures", "errors")})


class _State:
    """Pipeline products, computed lazily so a failing stage does not block unrelated fixtures."""

    def __init__(self, theory, config):
        self.theory, self.config = theory, config
        self._cache = {}

    def get(self, name):
        if name not in self._cache:
            self._cache[name] = getattr(self, "_" + name)()
        return self._cache[name]

    def _primaries(self):
        return derive_momenta_and_primaries(self.theory, seed=self.config.seed)

    def _hamiltonian(self):
        return build_hamiltonians(self.theory, self.get("primaries"))

    def _consistency(self):
        return consistency_evolution(self.theory, self.get("primaries"), self.get("hamiltonian"))

    def _surface(self):
        return Surface(self.theory.ps, [p for c in self.get("consistency").constraints for _, p in c.items()])

    def _macros(self):
        mt = MacroTable(self.theory.table)
        for c in self.get("consistency").constraints:
            if c.expr is not None:
                mt.define(c.name, c.expr, c.antisym)
        return mt

    def _matrix(self):
        return assemble_bracket_matrix(self.get("consistency").constraints, self.theory.ps)

    def _rank_primary(self):
        return numeric_rank_nullspace(self.get("consistency").primaries, self.theory.ps,
                                      samples=self.config.samples, seed=self.config.seed,
                                      surface_constraints=self.get("consistency").constraints)

    def _rank_full(self):
        return numeric_rank_nullspace(self.get("consistency").constraints, self.theory.ps,
                                      samples=self.config.samples, seed=self.config.seed)

    def _classification(self):
        return classify_constraints(self.theory, self.get("consistency").constraints, self.get("rank_full").rank,
                                    seed=self.config.seed)

    def _dof(self):
        return count_dof(self.get("classification"), self.theory.ps)

    def _printed_families(self):
        """Printed first- and second-class forms lowered on this backend, used without re-derivation."""
        mt = self.get("macros")
        out = []
        for f in fixture_set("palatini"):
            if f.kind in ("first_class", "second_class"):
                name, text = f.args
                out.append(constraint_from_expr(name, mt.expand(parse_expr(text, mt.table)), self.theory.table,
                                                self.theory.backend))
        return out

    def _families(self):
        if self.config.families == "printed":
            return self.get("printed_families")
        return self.get("classification").constraints

    def _generator(self):
        return castellani_generator(self.theory, self.get("classification").constraints)

    def _class_surface(self):
        return Surface(self.theory.ps, [p for c in self.get("classification").constraints for _, p in c.items()])

    def _display_table(self):
        from ..gauge import PALATINI_PARAMS

        fams = list(self.get("consistency").constraints)
        try:
            fams += self.get("classification").constraints
        except (PipelineError, ValueError, RuntimeError):
            pass
        t = family_table(self.theory.table, fams)
        try:
            return t.with_params(*PALATINI_PARAMS)
        except (ValueError, KeyError):
            return t

    def _adjoint_printed(self):
        th = self.theory
        return [constraint_from_expr(n, th.parse(t), th.table, th.backend) for n, t in ADJOINT_PRINTED.items()]


# ---------------------------------------------------------------------------
# fixture checks: each returns an outcome string and whether it counts as reproduced

def _verdict_ok(v):
    return v in ("exact", "weak")


def _check_primary(st, name, text):
    fam = next(c for c in st.get("primaries").primaries if c.name == name)
    v = compare_family(fam, st.theory.parse(text), st.theory)
    return v, v == "exact"


def _check_primary_count(st, rank, count):
    pr = st.get("primaries")
    out = f"hessian rank {pr.hessian_rank}, {pr.spacetime_count} primary"
    return out, pr.hessian_rank == rank and pr.spacetime_count == count


def _check_hamiltonian(st, text):
    th, h = st.theory, st.get("hamiltonian")
    d = h.canonical_poly - to_poly(th.parse(text), th.table, th.backend)
    if not d or is_divergence(d):
        return "exact", True
    if not st.get("surface").reduce(d):
        return "weak", True
    return "residual", False


def _check_secondary(st, name, text):
    fam = next(c for c in st.get("consistency").secondaries if c.name == name)
    v = compare_family(fam, st.theory.parse(text), st.theory, st.get("surface"))
    return v, _verdict_ok(v)


def _check_fixed_point(st):
    r = st.get("consistency")
    return f"{r.rounds} rounds, {len(r.tertiary)} tertiary", r.fixed_point


def _check_relation(st, family, text):
    k = relation_factor(st.get("consistency"), family, st.theory.parse(text), st.theory)
    return ("not proportional" if k is None else f"factor {k}"), k is not None and k != 0


def _check_multiplier(st, name, text):
    k = solution_factor(st.get("consistency"), name, st.theory.parse(text), st.theory)
    return ("not proportional" if k is None else f"factor {k}"), k == 1


def _check_matrix(st, a, b, text):
    bm = st.get("matrix")
    t2 = bm.param_table(a, b, st.theory.table)
    mt = MacroTable(t2)
    for c in st.get("consistency").secondaries:
        mt.define(c.name, c.expr, c.antisym)
    exp = to_poly(mt.expand(parse_expr(text, mt.table)), mt.table, st.theory.backend)
    v, _ = compare_density(bm.density(a, b), exp, st.get("surface"))
    return v, _verdict_ok(v)


def _check_matrix_support(st, expected):
    got = {tuple(sorted(p)) for p in st.get("matrix").nonzero_pairs()}
    want = {tuple(sorted(p)) for p in expected}
    extra, missing = sorted(got - want), sorted(want - got)
    out = "same set" if not extra and not missing else f"extra {extra}, missing {missing}"
    return out, not extra and not missing


def _check_rank(st, which, rank, null):
    r = st.get("rank_primary" if which == "primary" else "rank_full")
    out = f"rank {r.spacetime_rank}, null {r.spacetime_null} ({r.rank}/{r.size} components)"
    return out, (r.spacetime_rank, r.spacetime_null) == (rank, null)


def _check_class(st, name, text):
    cl = st.get("classification")
    try:
        fam = cl.family(name)
    except StopIteration:
        return "missing", False
    mt = st.get("macros")
    v = compare_family(fam, mt.expand(parse_expr(text, mt.table)), st.theory, st.get("surface"))
    return v, _verdict_ok(v)


def _check_dof(st, counting, n, first, second, dof):
    d = st.get("dof")
    got = ((d.canonical, d.first_class, d.second_class, d.dof) if counting == "spacetime"
           else (d.full_canonical, d.full_first_class, d.full_second_class, d.full_dof))
    return f"({got[0]}, {got[1]}, {got[2]}) -> {got[3]}", got == (n, first, second, dof)


def _check_closure(st, left, right, rhs, bracket=None):
    r = bracket_identity(st.theory, st.get("families"), left, right, rhs, bracket=bracket)
    return r.verdict, r.holds


def _check_dirac_closure(st, left, right, rhs):
    br = dirac_bracket_fn(st.theory.ps, st.get("classification").block)
    return _check_closure(st, left, right, rhs, bracket=br)


def _check_identity(st, lhs, rhs):
    v = verify_identity(st.theory, lhs, rhs, families=None, seed=st.config.seed)
    return v, _verdict_ok(v)


def _check_dirac_field(st, left, right, rhs, sign=-1):
    r = field_bracket(st.theory, st.get("classification").block, left, right, rhs, sign=sign)
    return r.verdict, r.verdict == "exact"


def _check_calH(st):
    v = calH_matches_canonical(st.theory, st.get("classification").constraints, st.get("hamiltonian"))
    return v, _verdict_ok(v)


def _check_extended_sign(st, sign):
    forms = extended_forms(st.theory, st.get("classification").constraints, sign)
    res = hamilton_consistency(st.theory, forms)
    bad = sorted({q[0] + "/" + v for (q, _), v in res.items() if v != "consistent"})
    return ("all consistent" if not bad else ", ".join(bad)), not bad


def _check_variation(st, target, expected):
    r = compare_variation(st.theory, st.get("generator"), target, expected, st.get("class_surface"))
    return r.verdict, _verdict_ok(r.verdict)


def _check_covariant(st, target, expected):
    g = st.get("generator")
    g2 = GaugeGenerator(g.text, substitute_params(g.density, g.table, st.theory.backend, CHAIN_RULES), g.table)
    r = compare_variation(st.theory, g2, target, expected, st.get("class_surface"))
    return r.verdict, _verdict_ok(r.verdict)


def _check_invariance(st, e_law, a_law):
    ok, _ = lagrangian_invariance(st.theory, {"e": e_law, "A": a_law})
    return ("divergence" if ok else "not a divergence"), ok


def _check_diffeo(st, fieldname, half, expected):
    from ..gauge import compare_law

    h = "" if half == "1" else f"{half} "
    rules = {"Th": (("I",), f"{h}xi[^alpha] e[_alpha ^I]", None),
             "De": (("I", "J"), f"{h}xi[^alpha] A[_alpha ^I ^J]", None)}
    v = compare_law(st.theory, fieldname, COVARIANT_LAW[fieldname], expected, rules)
    return v, v == "exact"


def _check_poincare(st, fieldname, param, expected):
    """Λ = 0 truncation of the covariant law with only one parameter switched on."""
    th = st.theory
    table = law_table(th)
    off = {"Th": {"De": (("I", "J"), "0", None)}, "De": {"Th": (("I",), "0", None)}}[param]
    got = law_components(th, table, fieldname, COVARIANT_LAW[fieldname], off)
    exp = law_components(th, table, fieldname, expected)
    ok = all(got[k].truncate_lambda() == exp[k].truncate_lambda() for k in got)
    return ("exact" if ok else "residual"), ok


def _check_jacobi(st):
    lam = Fraction(0) if st.theory.lam_mode == "zero" else Fraction(3, 7)
    bad = jacobi_violation(deformed_algebra(st.theory.backend, lam))
    return (f"Jacobi clean at Lam={lam}" if not bad else f"{len(bad)} violations"), not bad


def _check_composition(st):
    ok = commutator_closes(st.theory)
    return ("closes" if ok else "does not close"), ok


def _check_antisym_order(st, a, b):
    from ..gauge import PALATINI_PARAMS

    t = st.theory.table.with_params(*PALATINI_PARAMS)
    ok = verify_identity(st.theory, a, b, table=t, seed=st.config.seed) == "exact"
    return ("exact" if ok else "residual"), ok


def _check_adjoint_form(st, name, text):
    return _check_class(st, name, text)


def _check_adjoint_bracket(st, left, right, rhs):
    # both sides are combinations of constraints, so only exact equality discriminates
    r = bracket_identity(st.theory, st.get("adjoint_printed"), left, right, rhs)
    return ("weak only" if r.verdict == "weak" else r.verdict), r.verdict == "exact"


def _check_backend_jacobi(st):
    be = st.theory.backend
    res = be.jacobi_residual()
    return f"{be.name} Jacobi residual {res}", res == 0


CHECKS = {
    "primary": _check_primary,
    "primary_count": _check_primary_count,
    "hamiltonian": _check_hamiltonian,
    "secondary": _check_secondary,
    "fixed_point": _check_fixed_point,
    "relation": _check_relation,
    "multiplier": _check_multiplier,
    "matrix": _check_matrix,
    "matrix_support": _check_matrix_support,
    "rank": _check_rank,
    "first_class": _check_class,
    "second_class": _check_class,
    "dof": _check_dof,
    "closure": _check_closure,
    "identity": _check_identity,
    "dirac_field": _check_dirac_field,
    "dirac_closure": _check_dirac_closure,
    "calH": _check_calH,
    "extended_sign": _check_extended_sign,
    "variation": _check_variation,
    "covariant": _check_covariant,
    "invariance": _check_invariance,
    "diffeo": _check_diffeo,
    "poincare": _check_poincare,
    "jacobi": _check_jacobi,
    "composition": _check_composition,
    "antisym_order": _check_antisym_order,
    "adjoint_form": _check_adjoint_form,
    "adjoint_bracket": _check_adjoint_bracket,
    "backend_jacobi": _check_backend_jacobi,
}


def expected_outcome(fixture, backend) -> str:
    """Printed SO(2,1)-only forms are expected to fail once the contraction identity is disabled."""
    if fixture.id in SO21_ONLY and not backend.identity_enabled:
        return RESIDUAL
    return fixture.expect


_BRACKET_KINDS = {"closure": "", "dirac_closure": "_D", "dirac_field": "_D", "adjoint_bracket": ""}


def _tex(state, text: str) -> str:
    from .latex import escape, expr_latex

    try:
        return expr_latex(parse_raw(text, state.get("display_table")))
    except Exception:       # display only: fall back to verbatim text
        return r"\texttt{" + escape(text) + "}"


def describe(state: _State, fixture) -> tuple[str, str]:
    """Plain-text and LaTeX statement of a fixture."""
    a = fixture.args
    if fixture.kind in _BRACKET_KINDS:
        sub = _BRACKET_KINDS[fixture.kind]
        text = f"{{{a[0]}, {a[1]}}}{sub} = {a[2]}"
        tex = rf"\{{{_tex(state, a[0])},\ {_tex(state, a[1])}\}}{sub} = {_tex(state, a[2])}"
        return text, tex
    strs = [x for x in a if isinstance(x, str) and ("[" in x or x == "0")]
    if not strs:
        text = ", ".join(str(x) for x in a) if a else fixture.kind
        from .latex import escape
        return text, r"\text{" + escape(text) + "}"
    return " ; ".join(strs), r" \;;\; ".join(_tex(state, x) for x in strs)


def check_fixture(state: _State, fixture) -> FixtureResult:
    t0 = time.perf_counter()
    expect = expected_outcome(fixture, state.theory.backend)
    try:
        outcome, ok = CHECKS[fixture.kind](state, *fixture.args, **fixture.options)
    except (PipelineError, StopIteration, KeyError, ValueError) as exc:
        outcome, ok = f"error: {exc}", False
    if ok:
        verdict = REPRODUCED
    else:
        verdict = SUPPRESSED if expect == RESIDUAL else RESIDUAL
    elapsed = time.perf_counter() - t0
    text, tex = describe(state, fixture)
    return FixtureResult(fixture.id, fixture.kind, verdict, outcome, expect, fixture.criterion, fixture.note,
                         text, tex, elapsed)


# ---------------------------------------------------------------------------
# stage summaries

def _rend(c):
    return render(c.expr) if c.expr is not None else f"<{c.size} components>"


def _stage_summaries(st: _State, report: AnalysisReport):
    th = st.theory
    stages = [
        ("primaries", lambda: {
            "hessian rank": st.get("primaries").hessian_rank,
            "constraints": {th.display(c.name): _rend(c) for c in st.get("primaries").primaries},
            "spacetime count": st.get("primaries").spacetime_count,
        }),
        ("hamiltonian", lambda: {"canonical": st.get("hamiltonian").render(),
                                 "certified": st.get("hamiltonian").certified}),
        ("consistency", lambda: {
            "secondaries": {th.display(c.name): _rend(c) for c in st.get("consistency").secondaries},
            "fixed point": st.get("consistency").fixed_point,
            "rounds": st.get("consistency").rounds,
            "solved multipliers": len(st.get("consistency").multipliers.solved),
        }),
        ("matrix", lambda: {"nonzero": [f"{a}-{b}" for a, b in st.get("matrix").nonzero_pairs()]}),
        ("rank", lambda: {
            "primary": [st.get("rank_primary").spacetime_rank, st.get("rank_primary").spacetime_null],
            "full": [st.get("rank_full").spacetime_rank, st.get("rank_full").spacetime_null],
            "samples": st.config.samples,
        }),
        ("classification", lambda: {
            "first class": {th.display(c.name): _rend(c) for c in st.get("classification").first_class},
            "second class": {th.display(c.name): _rend(c) for c in st.get("classification").second_class},
        }),
        ("dof", lambda: [[str(x) for x in row] for row in st.get("dof").table()]),
    ]
    if th.name == "palatini":
        stages.append(("gauge", lambda: {"generator": st.get("generator").text}))
    for name, fn in stages:
        try:
            report.stages[name] = fn()
        except (PipelineError, ValueError, RuntimeError) as exc:
            report.errors.append({"stage": getattr(exc, "stage", name), "message": str(exc)})
            break


def run_analysis(config, fixtures=None) -> AnalysisReport:
    """Derive, classify and count for ``config``, then verify its fixture set.

    Stage errors are recorded with the stage name; results of earlier stages
    and fixtures that do not depend on the failed stage are kept.
    """
    theory = config.build_theory()
    report = AnalysisReport(theory.name, theory.backend.name, theory.lam_mode, config.seed, dict(CONVENTIONS))
    state = _State(theory, config)
    _stage_summaries(state, report)
    fx = fixtures if fixtures is not None else fixture_set(config.fixture_set)
    if config.include:
        fx = [f for f in fx if f.id.startswith(config.include)]
    for f in fx:
        report.fixtures.append(check_fixture(state, f).as_dict())
    return report


# ---------------------------------------------------------------------------
# standalone identity checks

def _bracket_parts(text: str):
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        return None
    inner, depth = text[1:-1], 0
    for i, ch in enumerate(inner):
        depth += ch in "[(" or -(ch in "])")
        if ch == "," and depth == 0:
            return inner[:i].strip(), inner[i + 1:].strip()
    return None


def _numeric_agree(p: Poly, n: int, seed: int) -> bool:
    rng = random.Random(seed)
    variables = sorted(p.variables())
    for _ in range(n):
        vals = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for v in variables}
        if p.evaluate(vals) != 0:
            return False
    return True


def verify_identity(theory, lhs: str, rhs: str, families=None, seed: int = 0, table=None, points: int = 8) -> str:
    """``"exact"``, ``"weak"``, ``"numeric-only"`` or ``"failed"`` for ``lhs = rhs``.

    ``lhs`` may be a bracket ``{X[...], Y[...]}`` of constraint family symbols,
    which is then checked with :func:`bracket_identity`.  Otherwise both sides
    are expanded into components over their free labels and compared exactly,
    then on the constraint surface of ``families``, then at random rational
    points.
    """
    parts = _bracket_parts(lhs)
    if parts is not None:
        if not families:
            raise ValueError("a bracket identity needs constraint families")
        return _map(bracket_identity(theory, families, parts[0], parts[1], rhs).verdict)
    table = table or (family_table(theory.table, families) if families else theory.table)
    L, R = parse_expr(lhs, table), parse_expr(rhs, table)
    free = [s.label for s in param_signature(L)]
    if sorted(free) != sorted(s.label for s in param_signature(R)):
        raise ValueError("both sides must carry the same free indices")
    import itertools

    def comp(x, vals):
        b = dict(zip(free, vals))
        if families:
            return lower(x, table, theory.backend, families, b)
        return to_poly(x, table, theory.backend, b)

    diffs = [comp(L, v) - comp(R, v) for v in itertools.product(range(3), repeat=len(free))]
    if not any(diffs):
        return "exact"
    diffs = [d for d in diffs if d]
    if families:
        if all(weak_reduce(d, families).certified for d in diffs):
            return "weak"
    if all(is_divergence(d) for d in diffs):
        return "exact"
    if all(_numeric_agree(d, points, seed) for d in diffs):
        return "numeric-only"
    return "failed"


def _map(v: str) -> str:
    return "failed" if v == "residual" else v


__all__ = ["AnalysisReport", "CONVENTIONS", "FixtureResult", "SUPPRESSED", "check_fixture", "expected_outcome",
           "run_analysis", "verify_identity"]
