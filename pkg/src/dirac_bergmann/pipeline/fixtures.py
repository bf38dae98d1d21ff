"""Published results for first-order 3D gravity, as machine-checkable fixtures.

Each fixture names a kind of check and its arguments in the index grammar.
``expect`` is ``"reproduced"`` when the printed form should come out of the
pipeline and ``"residual"`` for printed forms that do not (typos or sign
slips); those carry a ``corrects`` link from the fixture holding the
reading that does reproduce.
"""
from __future__ import annotations

from dataclasses import dataclass, field

REPRODUCED, RESIDUAL = "reproduced", "residual"


@dataclass(frozen=True)
class Fixture:
    id: str
    kind: str
    args: tuple
    expect: str = REPRODUCED
    note: str = ""
    corrects: str = ""          # id of the printed fixture this one corrects
    criterion: int = 0
    options: dict = field(default_factory=dict)


F = Fixture

PRIMARIES = [
    F("primary:phi0I", "primary", ("phi0I", "Pe[^0 _I]"), criterion=1),
    F("primary:phiaI", "primary", ("phiaI", "Pe[^a _I]"), criterion=1),
    F("primary:phi0IJ", "primary", ("phi0IJ", "PA[^0 _I _J]"), criterion=1),
    F("primary:phiaIJ", "primary", ("phiaIJ", "PA[^a _I _J] - eps0[^a ^b] epsI[_I _J _K] e[_b ^K]"), criterion=1),
    F("primary:count", "primary_count", (0, 6), criterion=1,
      note="Hessian rank and number of primary constraints (spacetime-index counting)"),
    F("hamiltonian:canonical", "hamiltonian",
      ("-1/2 e[_0 ^K] eps0[^a ^b] epsI[_I _J _K] F[_a _b ^I ^J] - A[_0 ^I ^J] D_a(PA[^a _I _J])"
       " + Lam e[_0 ^I] e[_a ^J] PA[^a _I _J]",), criterion=1),
]

SECONDARIES = [
    F("secondary:psiI", "secondary",
      ("psiI", "-1/2 eps0[^a ^b] epsI[_I _K _L] F[_a _b ^K ^L] + Lam e[_a ^J] PA[^a _I _J]"), criterion=2),
    F("secondary:psiIJ", "secondary", ("psiIJ", "D_a(PA[^a _I _J])"), criterion=2),
    F("secondary:fixed-point", "fixed_point", (), criterion=2, note="no tertiary constraints"),
    F("relation:phiaIJ:printed", "relation",
      ("phiaIJ", "eps0[^a ^b] epsI[_I _J _K] lae[^K _b] - 2 eps0[^a ^b] epsI[_I _J _K] D_b(e[_0 ^K])"
                 " - A[_0 _I ^K] PA[^a _J _K] + A[_0 _J ^K] PA[^a _I _K]"),
      expect=RESIDUAL, criterion=2, note="factor 2 on the D_b e_0 term"),
    F("relation:phiaIJ", "relation",
      ("phiaIJ", "eps0[^a ^b] epsI[_I _J _K] lae[^K _b] - eps0[^a ^b] epsI[_I _J _K] D_b(e[_0 ^K])"
                 " - A[_0 _I ^K] PA[^a _J _K] + A[_0 _J ^K] PA[^a _I _K]"),
      corrects="relation:phiaIJ:printed", criterion=2),
    F("relation:phiaI", "relation",
      ("phiaI", "eps0[^a ^b] epsI[_I _J _K] laA[^J ^K _b] - Lam PA[^a _I _J] e[_0 ^J]"), criterion=2),
    F("multiplier:laA:printed", "multiplier",
      ("laA", "Lam/4 eps0[_a _b] epsI[^I ^J ^K] PA[^b _K _L] e[_0 ^L]"), expect=RESIDUAL, criterion=2,
      note="derived coefficient is Lam/2"),
    F("multiplier:laA", "multiplier",
      ("laA", "Lam/2 eps0[_a _b] epsI[^I ^J ^K] PA[^b _K _L] e[_0 ^L]"), corrects="multiplier:laA:printed",
      criterion=2),
    F("multiplier:lae:printed", "multiplier",
      ("lae", "D_a(e[_0 ^I]) + 1/2 eps0[_a _b] epsI[^I ^J ^K] A[_0 _J ^L] PA[^b _K _L]"), expect=RESIDUAL,
      criterion=2, note="derived coefficient of the A_0 Pi term is 1"),
    F("multiplier:lae", "multiplier",
      ("lae", "D_a(e[_0 ^I]) + eps0[_a _b] epsI[^I ^J ^K] A[_0 _J ^L] PA[^b _K _L]"),
      corrects="multiplier:lae:printed", criterion=2),
]

MATRIX = [
    F("matrix:phiaI-phiaIJ", "matrix",
      ("phiaI", "phiaIJ", "s1[^I _a] s2[^K ^L _b] (-eps0[^a ^b] epsI[_I _K _L])"), criterion=3),
    F("matrix:phiaIJ-psiK", "matrix",
      ("phiaIJ", "psiI", "s1[^I ^J _a] eps0[^a ^b] (epsI[_K _I _J] d_b(s2[^K]) + epsI[_K _I _L] A[_b _J ^L] s2[^K]"
                         " + epsI[_K _L _J] A[_b _I ^L] s2[^K])"),
      criterion=3, note="derivative of the delta taken in the second argument"),
    F("matrix:phiaIJ-psiK:first-argument", "matrix",
      ("phiaIJ", "psiI", "s1[^I ^J _a] eps0[^a ^b] (-epsI[_K _I _J] d_b(s2[^K]) + epsI[_K _I _L] A[_b _J ^L] s2[^K]"
                         " + epsI[_K _L _J] A[_b _I ^L] s2[^K])"),
      expect=RESIDUAL, criterion=3, note="derivative of the delta read in the first argument"),
    F("matrix:phiaIJ-psiKL", "matrix",
      ("phiaIJ", "psiIJ", "s1[^I ^J _a] s2[^K ^L] 1/2 (eta[_L _J] PA[^a _K _I] - eta[_L _I] PA[^a _K _J]"
                          " + eta[_K _J] PA[^a _I _L] - eta[_K _I] PA[^a _J _L])"), criterion=3),
    F("matrix:psiI-psiJ", "matrix",
      ("psiI", "psiI", "s1[^I] s2[^J] (-Lam eps0[^a ^b] epsI[_I _J _H] D_a(e[_b ^H]))"), criterion=3),
    F("matrix:psiI-psiKL", "matrix",
      ("psiI", "psiIJ", "s1[^I] s2[^K ^L] 1/2 (eta[_K _I] psiI[_L] - eta[_L _I] psiI[_K]"
                        " + Lam (e[_a _K] PA[^a _I _L] - e[_a _L] PA[^a _I _K]))"), criterion=3),
    F("matrix:psiIJ-psiKL", "matrix",
      ("psiIJ", "psiIJ", "s1[^I ^J] s2[^K ^L] 1/2 (eta[_K _I] psiIJ[_L _J] - eta[_L _I] psiIJ[_K _J]"
                         " + eta[_K _J] psiIJ[_I _L] - eta[_J _L] psiIJ[_I _K])"), criterion=3),
    F("matrix:phiaI-psiJ", "matrix", ("phiaI", "psiI", "s1[^I _a] s2[^J] (-Lam PA[^a _J _I])"), criterion=3,
      note="nonzero entry absent from the printed list"),
    F("matrix:nonzero-set:printed", "matrix_support",
      (frozenset({("phiaI", "phiaIJ"), ("phiaIJ", "psiI"), ("phiaIJ", "psiIJ"), ("psiI", "psiI"),
                  ("psiI", "psiIJ"), ("psiIJ", "psiIJ")}),),
      expect=RESIDUAL, criterion=3, note="printed list of nonzero entries, up to transposition"),
    F("matrix:nonzero-set", "matrix_support",
      (frozenset({("phiaI", "phiaIJ"), ("phiaIJ", "psiI"), ("phiaIJ", "psiIJ"), ("psiI", "psiI"),
                  ("psiI", "psiIJ"), ("psiIJ", "psiIJ"), ("phiaI", "psiI")}),),
      corrects="matrix:nonzero-set:printed", criterion=3),
    F("rank:primary", "rank", ("primary", 4, 2), criterion=3),
    F("rank:full", "rank", ("full", 4, 4), criterion=3),
]

CLASSES = [
    F("first-class:gam0I", "first_class", ("gam0I", "Pe[^0 _I]"), criterion=4),
    F("first-class:gam0IJ", "first_class", ("gam0IJ", "PA[^0 _I _J]"), criterion=4),
    F("first-class:gamI", "first_class",
      ("gamI", "-D_a(phiaI[_I ^a]) - 1/2 eps0[^a ^b] epsI[_I _K _L] F[_a _b ^K ^L] + Lam e[_a ^J] PA[^a _I _J]"
               " + Lam e[_a ^J] phiaIJ[_I _J ^a]"), criterion=4),
    F("first-class:gamIJ", "first_class",
      ("gamIJ", "D_a(PA[^a _I _J]) + 1/2 epsI[^H _I _M] epsI[^M ^F _J] (phiaI[_F ^a] e[_a _H]"
                " - phiaI[_H ^a] e[_a _F])"), criterion=4),
    F("second-class:chiI", "second_class", ("chiI", "Pe[^a _I]"), criterion=4),
    F("second-class:chiIJ", "second_class", ("chiIJ", "PA[^a _I _J] - eps0[^a ^b] epsI[_I _J _K] e[_b ^K]"),
      criterion=4),
    F("dof:spacetime", "dof", ("spacetime", 12, 4, 4, 0), criterion=7),
    F("dof:full", "dof", ("full", 36, 12, 12, 0), criterion=7),
]

_ETA4 = ("1/2 (eta[_I _K] gamIJ[_L _J] - eta[_I _L] gamIJ[_K _J] + eta[_J _K] gamIJ[_I _L]"
         " - eta[_J _L] gamIJ[_I _K])")
_CHI4 = ("1/2 (eta[_K _J] chiIJ[_I _L ^a] - eta[_K _I] chiIJ[_J _L ^a] + eta[_L _I] chiIJ[_J _K ^a]"
         " - eta[_L _J] chiIJ[_I _K ^a])")

CLOSURE = [
    F("bracket:gamI-gamJ", "closure", ("gamI[_I]", "gamI[_J]", "2 Lam gamIJ[_J _I]"), criterion=5),
    F("bracket:gamI-gamKL", "closure",
      ("gamI[_I]", "gamIJ[_K _L]", "1/2 (eta[_I _K] gamI[_L] - eta[_I _L] gamI[_K])"), criterion=5),
    F("bracket:gamIJ-gamKL", "closure", ("gamIJ[_I _J]", "gamIJ[_K _L]", _ETA4), criterion=5),
    F("bracket:gamI-chiJ", "closure", ("gamI[_I]", "chiI[_J ^a]", "2 Lam chiIJ[_I _J ^a]"), criterion=5),
    F("bracket:gamI-chiKL", "closure",
      ("gamI[_I]", "chiIJ[_K _L ^a]", "1/2 (eta[_I _L] chiI[_K ^a] - eta[_I _K] chiI[_L ^a])"), criterion=5),
    F("bracket:gamIJ-chiK", "closure",
      ("gamIJ[_I _J]", "chiI[_K ^a]", "1/2 (eta[_K _J] chiI[_I ^a] - eta[_K _I] chiI[_J ^a])"), criterion=5),
    F("bracket:gamIJ-chiKL", "closure", ("gamIJ[_I _J]", "chiIJ[_K _L ^a]", _CHI4), criterion=5),
    F("bracket:chiI-chiKL", "closure", ("chiI[_I ^a]", "chiIJ[_K _L ^b]", "-eps0[^a ^b] epsI[_I _K _L]"),
      criterion=5),
    # step-by-step derivations of two of the brackets
    F("derivation:gamIJ-chiKL:line1", "closure",
      ("gamIJ[_I _J]", "chiIJ[_K _L ^a]",
       "1/2 (eta[_K _J] PA[^a _I _L] - eta[_K _I] PA[^a _J _L] + eta[_L _I] PA[^a _J _K] - eta[_L _J] PA[^a _I _K]"
       " - eps0[^a ^b] epsI[^H _I _M] eta[_J _Q] epsI[^F ^M ^Q] epsI[_K _L _F] e[_b _H]"
       " - eps0[^a ^b] epsI[_M _F _J] eta[_I _Q] epsI[^H ^Q ^M] epsI[_K _L _H] e[_b ^F])"), criterion=5),
    F("derivation:gamIJ-chiKL:line2", "closure",
      ("gamIJ[_I _J]", "chiIJ[_K _L ^a]",
       "1/2 (eta[_K _J] PA[^a _I _L] - eta[_K _I] PA[^a _J _L] + eta[_L _I] PA[^a _J _K] - eta[_L _J] PA[^a _I _K]"
       " + eps0[^a ^b] epsI[^H _I _M] eta[_J _Q] (delta[^M _K] delta[^Q _L] - delta[^M _L] delta[^Q _K]) e[_b _H]"
       " + eps0[^a ^b] epsI[_M _F _J] eta[_I _Q] (delta[^Q _K] delta[^M _L] - delta[^Q _L] delta[^M _K]) e[_b ^F])"),
      criterion=5),
    F("derivation:gamIJ-chiKL:line3", "closure",
      ("gamIJ[_I _J]", "chiIJ[_K _L ^a]",
       "1/2 (eta[_K _J] (PA[^a _I _L] - eps0[^a ^b] epsI[^H _I _L] e[_b _H])"
       " - eta[_K _I] (PA[^a _J _L] - eps0[^a ^b] epsI[^H _J _L] e[_b _H])"
       " + eta[_L _I] (PA[^a _J _K] - eps0[^a ^b] epsI[^H _J _K] e[_b _H])"
       " - eta[_L _J] (PA[^a _I _K] - eps0[^a ^b] epsI[^H _I _K] e[_b _H]))"), criterion=5),
    F("derivation:gamIJ-chiKL:line4", "closure", ("gamIJ[_I _J]", "chiIJ[_K _L ^a]", _CHI4), criterion=5),
    F("derivation:gamIJ-gamKL:line1", "closure",
      ("gamIJ[_I _J]", "gamIJ[_K _L]",
       "1/2 (eta[_K _I] (D_a(PA[^a _L _J]) + 1/2 (Pe[^a _L] e[_a _J] - Pe[^a _J] e[_a _L]))"
       " - eta[_L _I] (D_a(PA[^a _K _J]) + 1/2 (Pe[^a _K] e[_a _J] - Pe[^a _J] e[_a _K]))"
       " + eta[_K _J] (D_a(PA[^a _I _L]) + 1/2 (Pe[^a _I] e[_a _L] - Pe[^a _L] e[_a _I]))"
       " - eta[_J _L] (D_a(PA[^a _I _K]) + 1/2 (Pe[^a _I] e[_a _K] - Pe[^a _K] e[_a _I])))"), criterion=5),
    F("derivation:gamIJ-gamKL:line2", "closure",
      ("gamIJ[_I _J]", "gamIJ[_K _L]",
       "1/2 (eta[_K _I] gamIJ[_J _L] - eta[_L _J] gamIJ[_K _I] + eta[_K _J] gamIJ[_I _L] - eta[_J _L] gamIJ[_I _K])"),
      criterion=5, note="holds only weakly; the index order differs from the exact closure form"),
    F("derivation:gamI-gamMN", "closure",
      ("gamI[_I]", "gamIJ[_M _N]", "1/2 (eta[_I _M] gamI[_N] - eta[_I _N] gamI[_M])"), criterion=5),
    F("identity:so21-contraction", "identity",
      ("1/2 epsI[^H _I _M] epsI[^M ^F _J] (Pe[^a _F] e[_a _H] - Pe[^a _H] e[_a _F])",
       "1/2 (Pe[^a _I] e[_a _J] - Pe[^a _J] e[_a _I])"), criterion=5),
]

# closure fixtures whose printed forms rely on the SO(2,1) contraction identity
SO21_ONLY = ("bracket:gamIJ-chiKL", "derivation:gamIJ-chiKL:line2", "derivation:gamIJ-chiKL:line3",
             "derivation:gamIJ-chiKL:line4", "identity:so21-contraction")

DIRAC = [
    F("dirac:e-Pe", "dirac_field", ("e[_a ^I]", "Pe[^b _J]", "0"), criterion=6),
    F("dirac:e-A", "dirac_field", ("e[_a ^I]", "A[_b ^K ^L]", "-1/2 eps0[_a _b] epsI[^I ^K ^L]"), criterion=6),
    F("dirac:A-e", "dirac_field", ("A[_b ^K ^L]", "e[_a ^I]", "1/2 eps0[_a _b] epsI[^I ^K ^L]"), criterion=6),
    F("dirac:A-PA", "dirac_field",
      ("A[_a ^I ^J]", "PA[^b _K _L]", "1/2 (delta[_K ^I] delta[_L ^J] - delta[_L ^I] delta[_K ^J]) delta[_a ^b]"),
      criterion=6),
    F("dirac:e-A:plus-sign", "dirac_field", ("e[_a ^I]", "A[_b ^K ^L]", "-1/2 eps0[_a _b] epsI[^I ^K ^L]"),
      expect=RESIDUAL, criterion=6, options={"sign": 1},
      note="Dirac bracket with +{F,chi}C^-1{chi,G}"),
    F("dirac:gamI-gamJ", "dirac_closure",
      ("gamI[_I]", "gamI[_J]", "2 Lam (gamIJ[_J _I] + 1/2 eps0[_a _b] (epsI[^M _J ^L] chiIJ[_I _M ^a] chiI[_L ^b]"
                               " - epsI[^M _I ^L] chiIJ[_J _M ^a] chiI[_L ^b]))"), criterion=6),
    F("dirac:gamI-gamMN", "dirac_closure",
      ("gamI[_I]", "gamIJ[_M _N]",
       "1/2 (eta[_I _M] gamI[_N] - eta[_I _N] gamI[_M] + 1/2 eps0[_a _b] (epsI[_I ^E _M] chiI[_N ^a] chiI[_E ^b]"
       " - epsI[_I ^E _N] chiI[_M ^a] chiI[_E ^b]) + 2 Lam eps0[_a _b] (epsI[^K ^E _N] chiIJ[_I _K ^a]"
       " chiIJ[_M _E ^b] - epsI[^K ^E _M] chiIJ[_I _K ^a] chiIJ[_N _E ^b]))"), criterion=6),
    F("dirac:gamIJ-gamMN", "dirac_closure",
      ("gamIJ[_I _J]", "gamIJ[_M _N]",
       "1/2 (eta[_I _M] gamIJ[_N _J] - eta[_I _N] gamIJ[_M _J] + eta[_J _M] gamIJ[_I _N] - eta[_J _N] gamIJ[_I _M]"
       " + 1/2 eps0[_a _b] epsI[_I ^D _M] (chiI[_J ^a] chiIJ[_N _D ^b] + chiI[_N ^a] chiIJ[_J _D ^b])"
       " + 1/2 eps0[_a _b] epsI[_I ^D _N] (chiI[_J ^a] chiIJ[_D _M ^b] + chiI[_M ^a] chiIJ[_D _J ^b])"
       " + 1/2 eps0[_a _b] epsI[_J ^D _M] (chiI[_I ^a] chiIJ[_D _N ^b] + chiI[_N ^a] chiIJ[_D _I ^b])"
       " + 1/2 eps0[_a _b] epsI[_J ^D _N] (chiI[_I ^a] chiIJ[_M _D ^b] + chiI[_M ^a] chiIJ[_I _D ^b]))"),
      criterion=6),
    F("dirac:gamI-chiJ", "dirac_closure", ("gamI[_I]", "chiI[_J ^a]", "0"), criterion=6),
    F("dirac:gamI-chiKL", "dirac_closure", ("gamI[_I]", "chiIJ[_K _L ^a]", "0"), criterion=6),
    F("dirac:gamIJ-chiK", "dirac_closure", ("gamIJ[_I _J]", "chiI[_K ^a]", "0"), criterion=6),
    F("dirac:gamIJ-chiKL", "dirac_closure", ("gamIJ[_I _J]", "chiIJ[_K _L ^a]", "0"), criterion=6),
    F("dirac:chiI-chiKL", "dirac_closure", ("chiI[_I ^a]", "chiIJ[_K _L ^b]", "0"), criterion=6),
]

EXTENDED = [
    F("extended:calH", "calH", (), criterion=8, note="e_0 gam_I - A_0 gam_IJ against the canonical Hamiltonian"),
    F("extended:kinetic-sign:printed", "extended_sign", (-1,), expect=RESIDUAL, criterion=8,
      note="printed minus sign on the Pi^a_I de_a/dt term"),
    F("extended:kinetic-sign", "extended_sign", (1,), corrects="extended:kinetic-sign:printed", criterion=8),
]

GAUGE = [
    F("gauge:delta-e_a", "variation", ("e[_a ^I]", "D_a(ve[^I]) + ka[^I ^J] e[_a _J]"), criterion=8),
    F("gauge:delta-e_0", "variation", ("e[_0 ^I]", "D_0(ve0[^I])"), criterion=8),
    F("gauge:delta-A_a", "variation",
      ("A[_a ^I ^J]", "D_a(ka[^J ^I]) + Lam ve[^I] e[_a ^J] - Lam ve[^J] e[_a ^I]"), criterion=8),
    F("gauge:delta-A_0", "variation", ("A[_0 ^I ^J]", "D_0(ka0[^I ^J])"), criterion=8),
    F("gauge:delta-Pe_a", "variation",
      ("Pe[^a _I]", "2 Lam (PA[^a _I _J] - eps0[^a ^b] epsI[_I _J _K] e[_b ^K]) ve[^J] + ka[_I _J] Pe[^a ^J]"),
      criterion=8),
    F("gauge:delta-Pe_0", "variation", ("Pe[^0 _I]", "0"), criterion=8),
    F("gauge:delta-PA_a", "variation",
      ("PA[^a _I _J]", "eps0[^a ^b] epsI[_I _J _M] D_b(ve[^M]) + 1/2 (ve[_I] Pe[^a _J] - ve[_J] Pe[^a _I])"
                       " + ka[_I ^N] PA[^a _N _J] - ka[_J ^N] PA[^a _N _I]"), criterion=8),
    F("gauge:delta-PA_0", "variation", ("PA[^0 _I _J]", "0"), criterion=8),
    F("covariant:e:printed", "covariant", ("e[_a ^I]", "D_a(Th[^I]) + De[^I ^J] e[_a _J]"), expect=RESIDUAL,
      criterion=8, note="sign of the rotation term"),
    F("covariant:e", "covariant", ("e[_a ^I]", "D_a(Th[^I]) - De[^I ^J] e[_a _J]"),
      corrects="covariant:e:printed", criterion=8),
    F("covariant:A", "covariant",
      ("A[_a ^I ^J]", "D_a(De[^I ^J]) + Lam Th[^I] e[_a ^J] - Lam Th[^J] e[_a ^I]"), criterion=8),
    F("covariant:invariance:printed", "invariance",
      ("D_mu(Th[^I]) + De[^I ^J] e[_mu _J]", "D_mu(De[^I ^J]) + Lam Th[^I] e[_mu ^J] - Lam Th[^J] e[_mu ^I]"),
      expect=RESIDUAL, criterion=8),
    F("covariant:invariance", "invariance",
      ("D_mu(Th[^I]) - De[^I ^J] e[_mu _J]", "D_mu(De[^I ^J]) + Lam Th[^I] e[_mu ^J] - Lam Th[^J] e[_mu ^I]"),
      corrects="covariant:invariance:printed", criterion=8),
    F("diffeo:e:printed", "diffeo",
      ("e", "1/2", "xi[^alpha] d_alpha(e[_mu ^I]) + d_mu(xi[^alpha]) e[_alpha ^I]"
                   " + 1/2 xi[^alpha] (D_mu(e[_alpha ^I]) - D_alpha(e[_mu ^I]))"), expect=RESIDUAL, criterion=8),
    F("diffeo:e", "diffeo",
      ("e", "1", "xi[^alpha] d_alpha(e[_mu ^I]) + d_mu(xi[^alpha]) e[_alpha ^I]"
                 " + xi[^alpha] (D_mu(e[_alpha ^I]) - D_alpha(e[_mu ^I]))"), corrects="diffeo:e:printed", criterion=8),
    F("diffeo:A:printed", "diffeo",
      ("A", "1/2", "xi[^alpha] d_alpha(A[_mu ^I ^J]) + d_mu(xi[^alpha]) A[_alpha ^I ^J]"
                   " + xi[^alpha] (F[_mu _alpha ^I ^J] - Lam/2 (e[_mu ^I] e[_alpha ^J] - e[_alpha ^I] e[_mu ^J]))"),
      expect=RESIDUAL, criterion=8),
    F("diffeo:A", "diffeo",
      ("A", "1", "xi[^alpha] d_alpha(A[_mu ^I ^J]) + d_mu(xi[^alpha]) A[_alpha ^I ^J]"
                 " + xi[^alpha] (F[_mu _alpha ^I ^J] - Lam (e[_mu ^I] e[_alpha ^J] - e[_alpha ^I] e[_mu ^J]))"),
      corrects="diffeo:A:printed", criterion=8),
    F("gauge:rotation-order", "antisym_order", ("D_a(ka[^J ^I])", "-D_a(ka[^I ^J])"), criterion=8,
      note="transposed rotation parameter in the connection variation"),
    F("poincare:translation:e", "poincare", ("e", "Th", "D_mu(Th[^I])"), criterion=8),
    F("poincare:translation:A", "poincare", ("A", "Th", "0"), criterion=8),
    F("poincare:rotation:e:printed", "poincare", ("e", "De", "De[^I ^J] e[_mu _J]"), expect=RESIDUAL,
      criterion=8, note="same sign slip as the covariant frame law"),
    F("poincare:rotation:e", "poincare", ("e", "De", "-De[^I ^J] e[_mu _J]"),
      corrects="poincare:rotation:e:printed", criterion=8),
    F("poincare:rotation:A", "poincare", ("A", "De", "D_mu(De[^I ^J])"), criterion=8),
    F("algebra:jacobi", "jacobi", (), criterion=8),
    F("algebra:composition", "composition", (), criterion=8),
]

ADJOINT = [
    F("adjoint:gamI", "adjoint_form", ("gamI", "D_a(PA[^a _I])"), criterion=9),
    F("adjoint:GamI", "adjoint_form",
      ("GamI", "eps0[^a ^b] F[_a _b _I] - 2 Lam eps0[_a _b] epsI[_I ^J ^K] PA[^a _J] PA[^b _K]"), criterion=9,
      note="Lambda coefficient from the action normalisation", corrects="adjoint:GamI:printed"),
    F("adjoint:GamI:printed", "adjoint_form",
      ("GamI", "eps0[^a ^b] F[_a _b _I] - Lam eps0[_a _b] epsI[_I ^J ^K] PA[^a _J] PA[^b _K]"), expect=RESIDUAL,
      criterion=9),
    F("adjoint:backend-jacobi", "backend_jacobi", (), criterion=9),
    F("adjoint:dof:spacetime", "dof", ("spacetime", 12, 4, 4, 0), criterion=9),
    F("adjoint:dof:full", "dof", ("full", 36, 12, 12, 0), criterion=9),
    F("adjoint:gam-gam", "adjoint_bracket", ("gamI[_I]", "gamI[_J]", "epsI[_I _J ^K] gamI[_K]"), criterion=9),
    F("adjoint:gam-Gam", "adjoint_bracket", ("gamI[_I]", "GamI[_J]", "epsI[_I _J ^K] GamI[_K]"), criterion=9),
    F("adjoint:Gam-Gam:printed", "adjoint_bracket", ("GamI[_I]", "GamI[_J]", "Lam epsI[_I _J ^K] GamI[_K]"),
      expect=RESIDUAL, criterion=9),
    F("adjoint:Gam-Gam", "adjoint_bracket", ("GamI[_I]", "GamI[_J]", "-4 Lam epsI[_I _J ^K] gamI[_K]"),
      corrects="adjoint:Gam-Gam:printed", criterion=9),
]

# the printed adjoint constraints, as functions of (A_a^I, Pi^a_I) only
ADJOINT_PRINTED = {
    "gamI": "D_a(PA[^a _I])",
    "GamI": "eps0[^a ^b] F[_a _b _I] - Lam eps0[_a _b] epsI[_I ^J ^K] PA[^a _J] PA[^b _K]",
}

LAMBDA_ZERO = [
    F("primary:count", "primary_count", (0, 6), criterion=8),
    F("lambda-zero:gamI-gamJ", "closure", ("gamI[_I]", "gamI[_J]", "0"), criterion=8,
      note="translation constraints commute at vanishing Lambda"),
    F("lambda-zero:gamI-gamKL", "closure",
      ("gamI[_I]", "gamIJ[_K _L]", "1/2 (eta[_I _K] gamI[_L] - eta[_I _L] gamI[_K])"), criterion=8),
    F("lambda-zero:gamIJ-gamKL", "closure", ("gamIJ[_I _J]", "gamIJ[_K _L]", _ETA4), criterion=8),
    F("lambda-zero:dirac-gamI-gamJ", "dirac_closure", ("gamI[_I]", "gamI[_J]", "0"), criterion=8),
    F("dof:spacetime", "dof", ("spacetime", 12, 4, 4, 0), criterion=8),
] + [f for f in GAUGE if f.kind in ("poincare", "jacobi")]

PALATINI = PRIMARIES + SECONDARIES + MATRIX + CLASSES + CLOSURE + DIRAC + EXTENDED + GAUGE


def by_id(fixtures=None) -> dict:
    return {f.id: f for f in (fixtures if fixtures is not None else PALATINI + ADJOINT)}


def fixture_set(name: str) -> list:
    """Fixtures for a named set; ``closure`` is the backend-sensitive subset."""
    sets = {
        "palatini": PALATINI,
        "palatini-lambda-zero": LAMBDA_ZERO,
        "closure": CLOSURE,
        "adjoint": ADJOINT,
        "none": [],
    }
    return list(sets[name])


__all__ = ["ADJOINT", "ADJOINT_PRINTED", "Fixture", "LAMBDA_ZERO", "PALATINI", "fixture_set", "REPRODUCED", "RESIDUAL", "SO21_ONLY", "by_id"]
