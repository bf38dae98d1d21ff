"""Theory configuration files.

A config is an INI-style file read with :mod:`configparser`::

    [theory]
    name = palatini            ; palatini | adjoint | particle (selects the symbol table)
    lam_mode = symbolic        ; symbolic | zero
    seed = 20240601
    samples = 100              ; random points for rank sampling

    [fields]
    e = Pe                     ; field = momentum [antisym]
    A = PA antisym

    [lagrangian]
    text = eps0[^a ^b] e[_b ^K] ...     ; optional, defaults to the bundled density

    [backend]
    name = so21                ; so21 | euclidean, or give eta/eps below
    eta = -1 1 1
    eps = levi-civita          ; or 27 comma-separated entries of eps^{IJK}

    [fixtures]
    set = palatini             ; palatini | palatini-lambda-zero | closure | adjoint | none
    families = derived         ; derived | printed (forms used in closure checks)
    include =                  ; optional id prefixes, comma separated

The seed can be overridden with the ``DIRAC_BERGMANN_SEED`` environment variable.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..group_backends import BackendError, _levi_civita, backend_by_name, generic_epsilon_backend
from ..theories import adjoint_theory, palatini_theory, particle_theory

SEED_ENV = "DIRAC_BERGMANN_SEED"
DEFAULT_SEED = 20240601
FIXTURE_SETS = ("palatini", "palatini-lambda-zero", "closure", "adjoint", "none")
CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class ConfigError(ValueError):
    """Raised for any malformed or inconsistent configuration."""


@dataclass
class TheoryConfig:
    name: str = "palatini"
    lam_mode: str = "symbolic"
    seed: int = DEFAULT_SEED
    samples: int = 100
    fields: dict = field(default_factory=dict)          # field -> (momentum, split)
    lagrangian: str | None = None
    backend: str = "so21"
    eta: tuple | None = None
    eps: object = None
    fixture_set: str = "palatini"
    families: str = "derived"
    include: tuple = ()
    source: str = ""

    def build_backend(self):
        try:
            if self.eta is None:
                return backend_by_name(self.backend)
            eps = _levi_civita() if self.eps is None else self.eps
            return generic_epsilon_backend(np.diag(self.eta), eps, name=self.backend)
        except (BackendError, KeyError, ValueError) as exc:
            raise ConfigError(f"backend: {exc}") from exc

    def build_theory(self):
        be = self.build_backend()
        builders = {"palatini": palatini_theory, "adjoint": adjoint_theory}
        if self.name == "particle":
            return particle_theory()
        if self.name not in builders:
            raise ConfigError(f"unknown theory {self.name!r}")
        th = builders[self.name](be, lam_mode=self.lam_mode)
        if self.fields:
            want = {(f, m, split or "identity") for f, (m, split) in self.fields.items()}
            if want != {(f.field, f.momentum, f.projector) for f in th.fields}:
                raise ConfigError(f"fields {sorted(self.fields)} do not match the {self.name} symbol table")
        if self.lagrangian:
            try:
                th = type(th)(**{**_theory_kwargs(th), "lagrangian_text": self.lagrangian})
            except Exception as exc:
                raise ConfigError(f"lagrangian: {exc}") from exc
        return th


def _theory_kwargs(th) -> dict:
    keys = ("name", "table", "backend", "lagrangian_text", "fields", "lam_mode", "primary_names",
            "secondary_names", "first_class_names", "second_class_names", "multiplier_names", "pretty")
    return {k: getattr(th, k) for k in keys}


def _parse_eps(text: str):
    text = text.strip()
    if text in ("", "levi-civita"):
        return None
    vals = [int(v) for v in text.replace(",", " ").split()]
    if len(vals) != 27:
        raise ConfigError("backend eps needs 27 entries")
    return np.array(vals).reshape(3, 3, 3)


def parse_config(text: str, source: str = "<string>") -> TheoryConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str      # field names are case sensitive
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    cfg = TheoryConfig(source=source)
    th = cp["theory"] if cp.has_section("theory") else {}
    cfg.name = th.get("name", cfg.name).strip()
    cfg.lam_mode = th.get("lam_mode", cfg.lam_mode).strip()
    if cfg.lam_mode not in ("symbolic", "zero"):
        raise ConfigError(f"lam_mode must be symbolic or zero, got {cfg.lam_mode!r}")
    try:
        cfg.seed = int(th.get("seed", cfg.seed))
        cfg.samples = int(th.get("samples", cfg.samples))
    except ValueError as exc:
        raise ConfigError(f"theory: {exc}") from exc
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            cfg.seed = int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV} must be an integer") from exc
    if cp.has_section("fields"):
        for f, decl in cp["fields"].items():
            parts = decl.split()
            if not parts or len(parts) > 2 or (len(parts) == 2 and parts[1] != "antisym"):
                raise ConfigError(f"field declaration {f} = {decl!r}: expected '<momentum> [antisym]'")
            cfg.fields[f] = (parts[0], parts[1] if len(parts) == 2 else "")
    if cp.has_section("lagrangian"):
        cfg.lagrangian = " ".join(cp["lagrangian"].get("text", "").split()) or None
    if cp.has_section("backend"):
        b = cp["backend"]
        cfg.backend = b.get("name", cfg.backend).strip()
        if "eta" in b:
            try:
                cfg.eta = tuple(int(v) for v in b["eta"].split())
            except ValueError as exc:
                raise ConfigError(f"backend eta: {exc}") from exc
            if len(cfg.eta) != 3:
                raise ConfigError("backend eta needs 3 entries")
            cfg.eps = _parse_eps(b.get("eps", ""))
    if cp.has_section("fixtures"):
        fx = cp["fixtures"]
        cfg.fixture_set = fx.get("set", cfg.fixture_set).strip()
        cfg.families = fx.get("families", cfg.families).strip()
        cfg.include = tuple(s.strip() for s in fx.get("include", "").split(",") if s.strip())
    if cfg.fixture_set not in FIXTURE_SETS:
        raise ConfigError(f"unknown fixture set {cfg.fixture_set!r}")
    if cfg.families not in ("derived", "printed"):
        raise ConfigError(f"families must be derived or printed, got {cfg.families!r}")
    return cfg


def load_config(path) -> TheoryConfig:
    """Read a config file; a bare name such as ``palatini-so21`` picks a bundled config."""
    p = Path(path)
    if not p.exists() and (CONFIG_DIR / f"{path}.ini").exists():
        p = CONFIG_DIR / f"{path}.ini"
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(p))


def bundled_configs() -> list:
    return sorted(p.stem for p in CONFIG_DIR.glob("*.ini"))


__all__ = ["CONFIG_DIR", "ConfigError", "FIXTURE_SETS", "SEED_ENV", "TheoryConfig", "bundled_configs",
           "load_config", "parse_config"]
