"""Report rendering: plain text, machine-readable JSON and LaTeX."""
from __future__ import annotations

import json

from .analysis import AnalysisReport
from .latex import escape

FORMATS = ("text", "json-like", "latex")


class ReportFormatError(ValueError):
    pass


def _text(r: AnalysisReport) -> str:
    lines = [f"theory: {r.theory}   backend: {r.backend}   Lambda: {r.lam_mode}   seed: {r.seed}", "",
             "conventions:"]
    lines += [f"  {k}: {v}" for k, v in sorted(r.conventions.items())]
    for name, body in r.stages.items():
        lines += ["", f"[{name}]"]
        if isinstance(body, dict):
            for k, v in body.items():
                if isinstance(v, dict):
                    lines.append(f"  {k}:")
                    lines += [f"    {a} = {b}" for a, b in v.items()]
                else:
                    lines.append(f"  {k}: {v}")
        else:
            lines += ["  " + "  ".join(f"{c:>18}" for c in row) for row in body]
    if r.fixtures:
        lines += ["", "fixtures:"]
        width = max(len(f["id"]) for f in r.fixtures)
        for f in r.fixtures:
            lines.append(f"  {f['verdict']:<10}  {f['id']:<{width}}  {f['outcome']}")
        counts = {}
        for f in r.fixtures:
            counts[f["verdict"]] = counts.get(f["verdict"], 0) + 1
        lines += ["", "summary: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items()))]
    for e in r.errors:
        lines.append(f"error in stage {e['stage']}: {e['message']}")
    return "\n".join(lines) + "\n"


def _json(r: AnalysisReport) -> str:
    return json.dumps(r.as_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _latex(r: AnalysisReport) -> str:
    out = [r"\documentclass{article}", r"\usepackage{amsmath,longtable}", r"\begin{document}",
           rf"\section*{{Constraint analysis: {escape(r.theory)}, {escape(r.backend)}}}",
           rf"Cosmological constant mode: {escape(r.lam_mode)}; seed {r.seed}.", "",
           r"\subsection*{Conventions}", r"\begin{itemize}"]
    out += [rf"\item {escape(k)}: \texttt{{{escape(v)}}}" for k, v in sorted(r.conventions.items())]
    out.append(r"\end{itemize}")
    dirac = [f for f in r.fixtures if f["kind"] == "dirac_field" and f["verdict"] == "reproduced"]
    if dirac:
        out += [r"\subsection*{Dirac brackets of the canonical fields}", r"\begin{align*}"]
        out += [rf"  &{f['latex']} \, \delta^2(x-y) \\" for f in dirac]
        out += [r"\end{align*}"]
    if r.fixtures:
        out += [r"\subsection*{Fixtures}", r"\begin{longtable}{lll}",
                r"id & verdict & statement \\ \hline"]
        for f in r.fixtures:
            out.append(rf"\texttt{{{escape(f['id'])}}} & {escape(f['verdict'])} & ${f['latex']}$ \\")
        out.append(r"\end{longtable}")
    if r.errors:
        out += [r"\subsection*{Errors}", r"\begin{itemize}"]
        out += [rf"\item {escape(e['stage'])}: {escape(e['message'])}" for e in r.errors]
        out.append(r"\end{itemize}")
    out.append(r"\end{document}")
    return "\n".join(out) + "\n"


def emit_report(report: AnalysisReport, fmt: str = "text") -> str:
    try:
        return {"text": _text, "json-like": _json, "latex": _latex}[fmt](report)
    except KeyError:
        raise ReportFormatError(f"unknown report format {fmt!r}; choose from {', '.join(FORMATS)}") from None


def parse_report(text: str) -> AnalysisReport:
    """Inverse of ``emit_report(report, "json-like")``."""
    try:
        return AnalysisReport.from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ReportFormatError(f"not a machine-readable report: {exc}") from exc


__all__ = ["FORMATS", "ReportFormatError", "emit_report", "parse_report"]
