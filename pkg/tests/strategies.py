"""Hypothesis strategies for index expressions and jet polynomials."""
from fractions import Fraction

from hypothesis import strategies as st

from dirac_bergmann.poly import Poly

INTERNAL = ["J", "K", "L", "M", "N", "P", "Q", "R"]
SPATIAL = ["a", "b", "c", "d", "f", "g"]

# single terms with one free lower internal index I; dummies are {d1..} internal, {s1..} spatial
VECTOR_TERMS = [
    ["epsI[_I _{d1} _{d2}]", "e[_{s1} ^{d1}]", "e[_{s2} ^{d2}]", "eps0[^{s1} ^{s2}]"],
    ["PA[^{s1} _I _{d1}]", "e[_{s1} ^{d1}]"],
    ["PA[^{s1} _I _{d1}]", "Pe[^{s2} ^{d1}]", "e[_{s2} ^{d2}]", "e[_{s1} _{d2}]"],
    ["eta[_I _{d1}]", "e[_{s1} ^{d1}]", "Pe[^{s1} _{d2}]", "e[_0 ^{d2}]"],
    ["Pe[^{s1} _I]", "d_{s1}(e[_0 ^{d1}])", "e[_0 _{d1}]"],
    ["D_{s1}(PA[^{s1} _I _{d1}])", "e[_0 ^{d1}]"],
    ["epsI[_I _{d1} _{d2}]", "A[_{s1} ^{d1} ^{d2}]", "Pe[^{s1} _{d3}]", "e[_0 ^{d3}]"],
    ["delta[^{d1} _I]", "PA[^{s1} _{d1} _{d2}]", "e[_{s1} ^{d2}]"],
    ["epsI[^{d1} ^{d2} ^{d3}]", "epsI[_{d1} _I _{d4}]", "e[_{s1} _{d2}]", "Pe[^{s1} ^{d4}]", "e[_0 _{d3}]"],
    ["epsI[^{d1} ^{d2} ^{d3}]", "epsI[_{d1} _{d2} _I]", "e[_0 _{d3}]"],
    ["eta[_{d1} _{d2}]", "eta[^{d2} ^{d3}]", "Pe[^{s1} _{d3}]", "e[_{s1} ^{d1}]", "e[_0 _I]"],
]


@st.composite
def vector_term(draw):
    """One templated term: random dummy names, random factor order, random rational coefficient."""
    tpl = draw(st.sampled_from(VECTOR_TERMS))
    internal = draw(st.permutations(INTERNAL))
    spatial = draw(st.permutations(SPATIAL))
    names = {f"d{i + 1}": internal[i] for i in range(4)}
    names.update({f"s{i + 1}": spatial[i] for i in range(3)})
    factors = [f.format(**names) for f in draw(st.permutations(tpl))]
    num = draw(st.integers(-6, 6).filter(bool))
    den = draw(st.integers(1, 4))
    lam = draw(st.sampled_from(["", "Lam "]))
    return f"{Fraction(num, den)} {lam}" + " ".join(factors)


@st.composite
def vector_expr(draw, max_terms=3):
    """Text of a sum of templated terms, all with the single free index _I."""
    terms = draw(st.lists(vector_term(), min_size=1, max_size=max_terms))
    text = terms[0]
    for t in terms[1:]:
        text += " + " + t
    return text


# jet variables of the Palatini phase space, kept small for bracket properties
FIELD_JETS = [
    ("e", (1, 0), ()), ("e", (1, 2), ()), ("e", (2, 1), ()), ("e", (0, 1), ()), ("e", (1, 0), (1,)),
    ("e", (2, 1), (2,)), ("A", (1, 0, 1), ()), ("A", (2, 1, 2), ()), ("A", (1, 0, 2), (2,)),
    ("Pe", (1, 0), ()), ("Pe", (2, 1), ()), ("Pe", (1, 2), (1,)), ("Pe", (0, 1), ()),
    ("PA", (1, 0, 1), ()), ("PA", (2, 1, 2), ()), ("PA", (2, 0, 1), (1,)),
]


@st.composite
def jet_poly(draw, param=None, max_terms=3, max_degree=2):
    """Random polynomial in a few canonical jet variables, optionally times a smearing function."""
    p = Poly()
    for _ in range(draw(st.integers(1, max_terms))):
        mono = Poly.const(Fraction(draw(st.integers(-4, 4).filter(bool)), draw(st.integers(1, 3))))
        for _ in range(draw(st.integers(1, max_degree))):
            mono = mono * Poly.var(draw(st.sampled_from(FIELD_JETS)))
        p = p + mono
    if param is not None:
        d = draw(st.sampled_from([(), (1,), (2,)]))
        p = p * Poly.var((param, (), d))
    return p


def random_values(rng, variables):
    return {v: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for v in variables}
