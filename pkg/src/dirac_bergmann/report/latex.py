"""LaTeX rendering of index expressions."""
from __future__ import annotations

from fractions import Fraction

from ..tensor.expr import Expr, TensorFactor

SYMBOLS = {
    "Pe": r"\Pi", "PA": r"\Pi", "eps0": r"\epsilon", "epsI": r"\epsilon", "eta": r"\eta", "delta": r"\delta",
    "gam0I": r"\gamma", "gam0IJ": r"\gamma", "gamI": r"\gamma", "gamIJ": r"\gamma", "chiI": r"\chi",
    "chiIJ": r"\chi", "GamI": r"\Gamma", "phi0I": r"\phi", "phiaI": r"\phi", "phi0IJ": r"\phi",
    "phiaIJ": r"\phi", "psiI": r"\psi", "psiIJ": r"\psi", "lae": r"\lambda", "laA": r"\lambda",
    "lze": r"\lambda", "lzA": r"\lambda", "Th": r"\Theta", "De": r"\Delta", "Th2": r"\Theta_2",
    "De2": r"\Delta_2", "ve": r"\varepsilon", "ve0": r"\varepsilon_0", "ka": r"\kappa", "ka0": r"\kappa_0",
    "xi": r"\xi", "s1": "s_1", "s2": "s_2",
}
GREEK = {"alpha", "beta", "mu", "nu", "rho", "sigma", "tau"}
# symbols whose name already carries a fixed upper time index
TIME_UP = {"phi0I", "phi0IJ", "gam0I", "gam0IJ"}


def _label(lab: str) -> str:
    base = lab.rstrip("0123456789")
    if base in GREEK:
        return "\\" + base + lab[len(base):]
    return lab


def _indices(slots, time_up: bool = False) -> str:
    out = "{}^{0}" if time_up else ""
    run, var = [], None
    for s in slots:
        if s.variance != var and run:
            out += ("^" if var == "^" else "_") + "{" + " ".join(run) + "}"
            if s.variance != var:
                out += "{}"
            run = []
        var = s.variance
        run.append(_label(s.label))
    if run:
        out += ("^" if var == "^" else "_") + "{" + " ".join(run) + "}"
    return out.removesuffix("{}")


def factor_latex(f: TensorFactor) -> str:
    body = SYMBOLS.get(f.symbol, f.symbol) + _indices(f.slots, f.symbol in TIME_UP)
    for d in reversed(f.derivs):
        op = r"\partial" if d.op == "d" else "D"
        body = f"{op}_{{{_label(d.slot.label)}}} {body}"
    return body


def _coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else rf"\tfrac{{{c.numerator}}}{{{c.denominator}}}"


def expr_latex(x: Expr) -> str:
    if not x.terms:
        return "0"
    out = []
    for i, t in enumerate(x.terms):
        mag = abs(t.coeff)
        parts = []
        if mag != 1 or (not t.factors and not t.lam):
            parts.append(_coeff(mag))
        if t.lam:
            parts.append(r"\Lambda" + (f"^{t.lam}" if t.lam > 1 else ""))
        parts.extend(factor_latex(f) for f in t.factors)
        piece = r"\,".join(parts)
        if i == 0:
            out.append(("-" if t.coeff < 0 else "") + piece)
        else:
            out.append((" - " if t.coeff < 0 else " + ") + piece)
    return "".join(out)


def escape(text: str) -> str:
    """Escape plain text for LaTeX."""
    for a, b in (("\\", r"\textbackslash{}"), ("&", r"\&"), ("%", r"\%"), ("$", r"\$"), ("#", r"\#"),
                 ("_", r"\_"), ("{", r"\{"), ("}", r"\}"), ("^", r"\^{}"), ("~", r"\~{}")):
        text = text.replace(a, b) if a != "\\" else text.replace(a, "\0")
    return text.replace("\0", r"\textbackslash{}")


__all__ = ["SYMBOLS", "escape", "expr_latex", "factor_latex"]
