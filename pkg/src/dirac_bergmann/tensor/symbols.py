"""Symbol table: registered tensor symbols and index-label conventions."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

INTERNAL = "internal"
SPACETIME = "spacetime"
SPATIAL = "spatial"
TIME = "time"
ANY = "any"

UP, DOWN = "^", "_"

# Opaque covariant time derivative of a gauge parameter (jet direction code).
COV_TIME = 9

GREEK = ("alpha", "beta", "mu", "nu", "rho", "sigma", "tau")
_GREEK_RE = re.compile(r"^(%s)\d*'*$" % "|".join(GREEK))
_LABEL_RE = re.compile(r"^[A-Za-z][A-Za-z0-9']*$|^[0-9]$")

RANGES = {INTERNAL: (0, 1, 2), SPACETIME: (0, 1, 2), SPATIAL: (1, 2), TIME: (0,)}
DIMENSIONS = {INTERNAL: 3, SPACETIME: 3, SPATIAL: 2, TIME: 1}

# roles
FIELD = "field"
MOMENTUM = "momentum"
PARAM = "param"
NUMERIC = "numeric"
CURVATURE = "curvature"


class SymbolError(ValueError):
    pass


def label_kind(label: str, slot_kind: str) -> str:
    """Kind of an index label placed in a slot of ``slot_kind``."""
    if not _LABEL_RE.match(label):
        raise SymbolError(f"malformed index label {label!r}")
    if label.isdigit():
        v = int(label)
        if slot_kind == INTERNAL:
            if v > 2:
                raise SymbolError(f"internal component {v} out of range")
            return INTERNAL
        if slot_kind in (SPACETIME, ANY):
            if v > 2:
                raise SymbolError(f"spacetime component {v} out of range")
            return TIME if v == 0 else SPATIAL
        raise SymbolError(f"bad component {label!r}")
    if label[0].isupper():
        kind = INTERNAL
    elif _GREEK_RE.match(label):
        kind = SPACETIME
    else:
        kind = SPATIAL
    if slot_kind == ANY:
        return kind
    if slot_kind == INTERNAL and kind != INTERNAL:
        raise SymbolError(f"label {label!r} is not an internal index")
    if slot_kind == SPACETIME and kind == INTERNAL:
        raise SymbolError(f"label {label!r} is internal but the slot is spacetime")
    return kind


@dataclass(frozen=True)
class SymbolSpec:
    """Signature of a registered symbol.

    ``slots`` is a tuple of ``(slot_kind, default_variance)``; components
    are stored with the default variances.  ``antisym`` and ``sym`` list
    groups of slot positions with total (anti)symmetry.
    """

    name: str
    slots: tuple = ()
    antisym: tuple = ()
    sym: tuple = ()
    role: str = FIELD

    @property
    def arity(self) -> int:
        return len(self.slots)

    def group_multiplicity(self) -> int:
        m = 1
        for g in self.antisym:
            for k in range(2, len(g) + 1):
                m *= k
        return m


@dataclass
class SymbolTable:
    """Registry of symbols and the covariant-derivative convention.

    ``connection`` is ``("pair", "A")`` for a connection ``A_μ^{IJ}``
    antisymmetric in its internal pair, or ``("adjoint", "A")`` for an
    adjoint-valued ``A_μ^I`` coupled through structure constants.
    """

    symbols: dict = field(default_factory=dict)
    connection: tuple = ("pair", "A")

    def register(self, spec: SymbolSpec) -> SymbolSpec:
        if spec.name in ("Lam", "d", "D"):
            raise SymbolError(f"{spec.name!r} is reserved")
        self.symbols[spec.name] = spec
        return spec

    def get(self, name: str) -> SymbolSpec:
        try:
            return self.symbols[name]
        except KeyError:
            raise SymbolError(f"unknown symbol {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self.symbols

    def copy(self) -> "SymbolTable":
        return SymbolTable(dict(self.symbols), self.connection)

    def with_params(self, *specs: SymbolSpec) -> "SymbolTable":
        t = self.copy()
        for s in specs:
            t.register(s)
        return t


def numeric_symbols() -> list[SymbolSpec]:
    return [
        SymbolSpec("epsI", ((INTERNAL, UP),) * 3, antisym=((0, 1, 2),), role=NUMERIC),
        SymbolSpec("eps0", ((SPACETIME, UP),) * 2, antisym=((0, 1),), role=NUMERIC),
        SymbolSpec("eta", ((INTERNAL, DOWN),) * 2, sym=((0, 1),), role=NUMERIC),
        SymbolSpec("delta", ((ANY, UP), (ANY, DOWN)), role=NUMERIC),
    ]


def palatini_symbols() -> SymbolTable:
    """Symbols of first-order 3D gravity with an antisymmetric-pair connection."""
    t = SymbolTable(connection=("pair", "A"))
    for s in numeric_symbols():
        t.register(s)
    t.register(SymbolSpec("e", ((SPACETIME, DOWN), (INTERNAL, UP))))
    t.register(SymbolSpec("A", ((SPACETIME, DOWN), (INTERNAL, UP), (INTERNAL, UP)), antisym=((1, 2),)))
    t.register(SymbolSpec("Pe", ((SPACETIME, UP), (INTERNAL, DOWN)), role=MOMENTUM))
    t.register(SymbolSpec("PA", ((SPACETIME, UP), (INTERNAL, DOWN), (INTERNAL, DOWN)),
                          antisym=((1, 2),), role=MOMENTUM))
    t.register(SymbolSpec("F", ((SPACETIME, DOWN), (SPACETIME, DOWN), (INTERNAL, UP), (INTERNAL, UP)),
                          antisym=((0, 1), (2, 3)), role=CURVATURE))
    return t


def adjoint_symbols() -> SymbolTable:
    """Symbols of the adjoint-representation theory (connection ``A_μ^I``)."""
    t = SymbolTable(connection=("adjoint", "A"))
    for s in numeric_symbols():
        t.register(s)
    t.register(SymbolSpec("e", ((SPACETIME, DOWN), (INTERNAL, UP))))
    t.register(SymbolSpec("A", ((SPACETIME, DOWN), (INTERNAL, UP))))
    t.register(SymbolSpec("Pe", ((SPACETIME, UP), (INTERNAL, DOWN)), role=MOMENTUM))
    t.register(SymbolSpec("PA", ((SPACETIME, UP), (INTERNAL, DOWN)), role=MOMENTUM))
    t.register(SymbolSpec("F", ((SPACETIME, DOWN), (SPACETIME, DOWN), (INTERNAL, UP)),
                          antisym=((0, 1),), role=CURVATURE))
    return t


def param_spec(name: str, signature: str, antisym=(), role: str = PARAM) -> SymbolSpec:
    """Build a parameter symbol from a compact signature such as ``"_s ^i ^i"``.

    ``s`` marks a spacetime slot and ``i`` an internal slot; the prefix is
    the default variance.
    """
    slots = []
    for tok in signature.split():
        var, k = tok[0], tok[1:]
        if var not in (UP, DOWN) or k not in ("s", "i"):
            raise SymbolError(f"bad slot token {tok!r}")
        slots.append((SPACETIME if k == "s" else INTERNAL, var))
    return SymbolSpec(name, tuple(slots), antisym=tuple(tuple(g) for g in antisym), role=role)
