"""Bundled theories: first-order 3D gravity, its adjoint form, and a free particle."""
from __future__ import annotations

from dataclasses import dataclass, field

from .group_backends import GroupBackend, so21_backend
from .phase_space import FieldSpec, PhaseSpaceRegistry
from .tensor.expr import Expr
from .tensor.parser import parse_expr
from .tensor.symbols import (
    INTERNAL,
    MOMENTUM,
    SPACETIME,
    UP,
    DOWN,
    SymbolSpec,
    SymbolTable,
    adjoint_symbols,
    numeric_symbols,
    palatini_symbols,
)

PALATINI_LAGRANGIAN = (
    "eps0[^a ^b] e[_b ^K] epsI[_I _J _K] d_0(A[_a ^I ^J])"
    " - eps0[^a ^b] e[_b ^K] epsI[_I _J _K] D_a(A[_0 ^I ^J])"
    " + 1/2 eps0[^a ^b] epsI[_I _J _K] e[_0 ^K] F[_a _b ^I ^J]"
    " - Lam eps0[^a ^b] epsI[_I _J _K] e[_0 ^I] e[_a ^J] e[_b ^K]"
)

ADJOINT_LAGRANGIAN = (
    "eps0[^a ^b] e[_b _I] d_0(A[_a ^I])"
    " - eps0[^a ^b] e[_b _I] D_a(A[_0 ^I])"
    " + 1/2 eps0[^a ^b] e[_0 _I] F[_a _b ^I]"
    " - Lam eps0[^a ^b] epsI[_I _J _K] e[_0 ^I] e[_a ^J] e[_b ^K]"
)

PARTICLE_LAGRANGIAN = "1/2 d_0(q) d_0(q)"


@dataclass
class Theory:
    """Everything the pipeline needs to analyse one Lagrangian.

    The naming maps only attach names to families the pipeline derives; they
    never supply the constraints themselves.
    """

    name: str
    table: SymbolTable
    backend: GroupBackend
    lagrangian_text: str
    fields: tuple
    lam_mode: str = "symbolic"
    primary_names: dict = field(default_factory=dict)
    secondary_names: dict = field(default_factory=dict)
    first_class_names: dict = field(default_factory=dict)
    second_class_names: dict = field(default_factory=dict)
    multiplier_names: dict = field(default_factory=dict)
    pretty: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ps = PhaseSpaceRegistry(self.table, self.backend, tuple(self.fields))
        self.lagrangian: Expr = parse_expr(self.lagrangian_text, self.table)
        if self.lam_mode == "zero":
            self.lagrangian = Expr(tuple(t for t in self.lagrangian.terms if t.lam == 0))
        elif self.lam_mode != "symbolic":
            raise ValueError(f"unknown Lambda mode {self.lam_mode!r}")

    def parse(self, text: str) -> Expr:
        return parse_expr(text, self.table)

    def display(self, name: str) -> str:
        return self.pretty.get(name, name)


def _pretty_palatini() -> dict:
    return {
        "phi0I": "phi^0_I", "phiaI": "phi^a_I", "phi0IJ": "phi^0_IJ", "phiaIJ": "phi^a_IJ",
        "psiI": "psi_I", "psiIJ": "psi_IJ",
        "gam0I": "gamma^0_I", "gam0IJ": "gamma^0_IJ", "gamI": "gamma_I", "gamIJ": "gamma_IJ",
        "chiI": "chi^a_I", "chiIJ": "chi^a_IJ",
    }


def palatini_theory(backend: GroupBackend | None = None, lam_mode: str = "symbolic") -> Theory:
    """First-order 3D gravity with cosmological constant and an antisymmetric-pair connection."""
    backend = backend or so21_backend()
    return Theory(
        name="palatini",
        table=palatini_symbols(),
        backend=backend,
        lagrangian_text=PALATINI_LAGRANGIAN,
        fields=(FieldSpec("e", "Pe"), FieldSpec("A", "PA", "antisym")),
        lam_mode=lam_mode,
        primary_names={("e", "0"): "phi0I", ("e", "a"): "phiaI", ("A", "0"): "phi0IJ", ("A", "a"): "phiaIJ"},
        secondary_names={"phi0I": ("psiI", -1), "phi0IJ": ("psiIJ", 1)},
        first_class_names={"phi0I": "gam0I", "phi0IJ": "gam0IJ", "psiI": "gamI", "psiIJ": "gamIJ"},
        second_class_names={"phiaI": "chiI", "phiaIJ": "chiIJ"},
        multiplier_names={"phi0I": "lze", "phiaI": "lae", "phi0IJ": "lzA", "phiaIJ": "laA"},
        pretty=_pretty_palatini(),
    )


def adjoint_theory(backend: GroupBackend | None = None, lam_mode: str = "symbolic") -> Theory:
    """The same gravity theory with the connection in the adjoint representation.

    ``A_μ^I`` couples through the structure constants ``f^I_{JK}`` of the
    backend (``D v^I = ∂v^I + f^I_{JK} A^J v^K``), so no contraction identity
    for ε is needed anywhere.
    """
    backend = backend or so21_backend()
    return Theory(
        name="adjoint",
        table=adjoint_symbols(),
        backend=backend,
        lagrangian_text=ADJOINT_LAGRANGIAN,
        fields=(FieldSpec("e", "Pe"), FieldSpec("A", "PA")),
        lam_mode=lam_mode,
        primary_names={("e", "0"): "phi0e", ("e", "a"): "phiae", ("A", "0"): "phi0A", ("A", "a"): "phiaA"},
        secondary_names={"phi0e": ("psiGam", 2), "phi0A": ("psigam", 1)},
        first_class_names={"phi0e": "gam0e", "phi0A": "gam0A", "psiGam": "GamI", "psigam": "gamI"},
        second_class_names={"phiae": "chie", "phiaA": "chiA"},
        multiplier_names={"phi0e": "lze", "phiae": "lae", "phi0A": "lzA", "phiaA": "laA"},
        pretty={"gamI": "gamma_I", "GamI": "Gamma_I", "psigam": "psi_I", "psiGam": "Psi_I",
                "chie": "chi^a_I(e)", "chiA": "chi^a_I(A)"},
    )


def particle_theory() -> Theory:
    """A single free particle, ``L = q̇²/2``: a regular system with no constraints."""
    t = SymbolTable()
    for s in numeric_symbols():
        t.register(s)
    t.register(SymbolSpec("q", ()))
    t.register(SymbolSpec("p", (), role=MOMENTUM))
    return Theory(
        name="particle",
        table=t,
        backend=so21_backend(),
        lagrangian_text=PARTICLE_LAGRANGIAN,
        fields=(FieldSpec("q", "p"),),
        primary_names={("q", ""): "phiq"},
        multiplier_names={"phiq": "lq"},
    )


def field_template(spec: SymbolSpec, split: str) -> tuple[str, str, str]:
    """``(field, momentum, velocity)`` index strings for a family.

    ``split`` is ``"0"`` or ``"a"`` for the first spacetime slot, ``""`` when
    the field has none.
    """
    labels = iter("IJKLMN")
    fslots, mslots = [], []
    for kind, var in spec.slots:
        lab = split if kind == SPACETIME else next(labels)
        fslots.append(var + lab)
        mslots.append((UP if var == DOWN else DOWN) + lab)
    return " ".join(fslots), " ".join(mslots), ""


__all__ = [
    "ADJOINT_LAGRANGIAN",
    "PALATINI_LAGRANGIAN",
    "PARTICLE_LAGRANGIAN",
    "Theory",
    "adjoint_theory",
    "field_template",
    "palatini_theory",
    "particle_theory",
]
