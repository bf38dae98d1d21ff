"""Command line interface.

Exit codes: 0 when every fixture is reproduced (or the identity holds),
2 when residuals are present, 3 for configuration or input errors.
"""
from __future__ import annotations

import argparse
import itertools
import random
import sys
from fractions import Fraction
from pathlib import Path

from ..phase_space import param_signature
from ..pipeline.families import lower
from ..tensor.parser import ParseError, parse_expr
from .analysis import _State, run_analysis, verify_identity
from .config import SEED_ENV, ConfigError, bundled_configs, load_config
from .emit import FORMATS, ReportFormatError, emit_report, parse_report

EXIT_OK, EXIT_RESIDUAL, EXIT_CONFIG = 0, 2, 3


def _families(cfg, theory):
    st = _State(theory, cfg)
    return st.get("classification").constraints


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    report = run_analysis(cfg)
    text = emit_report(report, args.format)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.json").write_text(emit_report(report, "json-like"))
        if args.format != "json-like":
            (out / ("results.tex" if args.format == "latex" else "results.txt")).write_text(text)
    sys.stdout.write(text)
    return report.exit_code


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    theory = cfg.build_theory()
    fams = _families(cfg, theory) if args.lhs.strip().startswith("{") or args.families else None
    verdict = verify_identity(theory, args.lhs, args.rhs, families=fams, seed=cfg.seed)
    print(verdict)
    return EXIT_OK if verdict in ("exact", "weak") else EXIT_RESIDUAL


def cmd_eval(args) -> int:
    cfg = load_config(args.config)
    theory = cfg.build_theory()
    fams = None
    try:
        x = parse_expr(args.expr, theory.table)
        table = theory.table
    except ParseError:
        from ..pipeline.families import family_table

        fams = _families(cfg, theory)
        table = family_table(theory.table, fams)
        x = parse_expr(args.expr, table)
    free = [s.label for s in param_signature(x)]
    rng = random.Random(args.point)
    values = {}

    def value(v):
        if v not in values:
            values[v] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        return values[v]

    for comps in itertools.product(range(3), repeat=len(free)):
        b = dict(zip(free, comps))
        p = lower(x, table, theory.backend, fams or [], b)
        for v in sorted(p.variables()):
            value(v)
        label = ",".join(f"{k}={c}" for k, c in b.items())
        print(f"{label or 'value'}: {p.evaluate(values)}")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        text = Path(args.results).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read results {args.results}: {exc}") from exc
    report = parse_report(text)
    sys.stdout.write(emit_report(report, args.format))
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dirac-bergmann",
        description="Dirac-Bergmann constraint analysis of first-order field theories.",
        epilog=f"Bundled configs: {', '.join(bundled_configs())}. "
               f"Set {SEED_ENV} to override the random seed of a config.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline and check the config's fixtures")
    a.add_argument("config", help="config file or bundled config name")
    a.add_argument("--format", choices=FORMATS, default="text")
    a.add_argument("--out", help="directory for results.json and the rendered report")
    a.set_defaults(fn=cmd_analyze)

    v = sub.add_parser("verify", help="check lhs = rhs exactly or weakly; lhs may be a bracket {X, Y}")
    v.add_argument("config")
    v.add_argument("lhs")
    v.add_argument("rhs")
    v.add_argument("--families", action="store_true", help="weak-reduce against the classified constraints")
    v.set_defaults(fn=cmd_verify)

    e = sub.add_parser("eval", help="evaluate an expression at a random rational point")
    e.add_argument("config")
    e.add_argument("expr")
    e.add_argument("--point", type=int, default=0, help="seed of the random point")
    e.set_defaults(fn=cmd_eval)

    r = sub.add_parser("report", help="render a saved results.json")
    r.add_argument("results")
    r.add_argument("--format", choices=FORMATS, default="text")
    r.set_defaults(fn=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, ParseError, ReportFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
