"""Recursive-descent parser for the indexed expression grammar.

Grammar (whitespace insignificant)::

    expr    := ['+'|'-'] product (('+'|'-') product)*
    product := unary (['*'|'/'] unary)*          juxtaposition multiplies
    unary   := '-' unary | atom
    atom    := NUMBER | 'Lam' | NAME '[' index* ']' | NAME
             | ('d'|'D') '_' LABEL '(' expr ')' | '(' expr ')'
    index   := ('^'|'_') LABEL

Division is only by rational literals.  ``F`` and ``D_a`` stay symbolic in
the parsed expression; :func:`expr.expand_covariant` rewrites them in
∂-form before component work.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .expr import Expr, ExprError, IndexSlot, TensorFactor, Term, canonicalize, partial, validate_term
from .symbols import (
    DOWN,
    INTERNAL,
    SPACETIME,
    UP,
    SymbolError,
    SymbolTable,
    label_kind,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col
        self.msg = msg


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9']*)
  | (?P<op>[\^_\[\]\(\)\+\-\*/])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", *_linecol(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, table: SymbolTable):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.table = table

    # -- helpers --------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, *_linecol(self.text, tok.pos))

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def wrap(self, fn, tok):
        try:
            return fn()
        except (ExprError, SymbolError) as exc:
            self.error(str(exc), tok)

    # -- grammar --------------------------------------------------------
    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.tok.text == "-" else 1
            self.i += 1
        acc = self.product().scale(sign)
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.tok
            self.i += 1
            rhs = self.product()
            acc = self.wrap(lambda: acc + (rhs if op.text == "+" else -rhs), op)
        return acc

    def product(self) -> Expr:
        acc = self.unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.text == "*":
                self.i += 1
                rhs = self.unary()
                acc = self.wrap(lambda: acc * rhs, t)
            elif t.kind == "op" and t.text == "/":
                self.i += 1
                if self.tok.kind != "num":
                    self.error("division only by rational literals")
                d = int(self.tok.text)
                self.i += 1
                if d == 0:
                    self.error("division by zero", t)
                acc = acc.scale(Fraction(1, d))
            elif t.kind in ("num", "name") or (t.kind == "op" and t.text == "("):
                rhs = self.unary()
                acc = self.wrap(lambda: acc * rhs, t)
            else:
                return acc

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.i += 1
            return -self.unary()
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Expr.const(int(t.text))
        if t.kind == "op" and t.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind != "name":
            self.error(f"unexpected {t.text or 'end of input'!r}")
        self.i += 1
        if t.text == "Lam":
            return Expr((Term(Fraction(1), 1, ()),))
        if t.text in ("d", "D") and self.tok.text == "_":
            return self.derivative(t)
        return self.factor(t)

    def derivative(self, optok: Token) -> Expr:
        self.expect("_")
        lab = self.tok
        if lab.kind not in ("name", "num"):
            self.error("expected derivative index label")
        self.i += 1
        self.expect("(")
        inner = self.expr()
        self.expect(")")

        def build():
            kind = label_kind(lab.text, SPACETIME)
            slot = IndexSlot(lab.text, kind, DOWN)
            return partial(inner, slot, self.table, op=optok.text)

        return self.wrap(build, optok)

    def factor(self, nametok: Token) -> Expr:
        name = nametok.text
        spec = self.wrap(lambda: self.table.get(name), nametok)
        slots = []
        if self.tok.text == "[":
            self.i += 1
            while self.tok.text != "]":
                vt = self.tok
                if vt.text not in (UP, DOWN):
                    self.error("expected '^' or '_' before an index label")
                self.i += 1
                lt = self.tok
                if lt.kind not in ("name", "num"):
                    self.error("expected index label")
                self.i += 1
                slots.append((vt.text, lt))
            self.expect("]")
        seen = {}
        for variance, lt in slots:
            if not lt.text.isdigit() and seen.get(lt.text) == variance:
                self.error(f"index {lt.text!r} repeated with the same variance", lt)
            seen[lt.text] = variance
        if len(slots) != spec.arity:
            self.error(f"{name} takes {spec.arity} indices, got {len(slots)}", nametok)
        built = []
        for (variance, lt), (slot_kind, _default) in zip(slots, spec.slots):
            kind = self.wrap(lambda: label_kind(lt.text, slot_kind), lt)
            built.append(IndexSlot(lt.text, kind, variance))
        if name == "delta" and len(built) == 2:
            if built[0].kind != built[1].kind and not (built[0].concrete or built[1].concrete):
                self.error("delta indices must have the same kind", nametok)
            if built[0].variance == built[1].variance:
                self.error("delta needs one upper and one lower index", nametok)
        f = TensorFactor(name, tuple(built), ())
        return self.wrap(lambda: Expr.factor(f), nametok)


def expand_curvature(f: TensorFactor, table: SymbolTable) -> Expr:
    """F_ab in ∂-form for the table's connection convention."""
    from .expr import fresh_label

    mode, conn = table.connection
    a, b = f.slots[0], f.slots[1]
    da = IndexSlot(a.label, a.kind, DOWN)
    db = IndexSlot(b.label, b.kind, DOWN)
    internal = f.slots[2:]

    def conn_factor(sp, *inner):
        return TensorFactor(conn, (IndexSlot(sp.label, sp.kind, DOWN),) + tuple(inner))

    out = Expr()
    out = out + partial(Expr.factor(conn_factor(b, *internal)), da, table)
    out = out - partial(Expr.factor(conn_factor(a, *internal)), db, table)
    avoid = {s.label for s in f.slots}
    if mode == "pair":
        i, j = internal
        k = fresh_label(INTERNAL, avoid)
        for s1, s2, sign in ((a, b, 1), (b, a, -1)):
            t = Term(
                Fraction(sign),
                0,
                (
                    conn_factor(s1, i, IndexSlot(k, INTERNAL, DOWN)),
                    conn_factor(s2, IndexSlot(k, INTERNAL, UP), j),
                ),
            )
            validate_term(t)
            out = out + Expr((t,))
    else:
        (i,) = internal
        j = fresh_label(INTERNAL, avoid)
        k = fresh_label(INTERNAL, avoid | {j})
        t = Term(
            Fraction(1),
            0,
            (
                TensorFactor("epsI", (i, IndexSlot(j, INTERNAL, DOWN), IndexSlot(k, INTERNAL, DOWN))),
                conn_factor(a, IndexSlot(j, INTERNAL, UP)),
                conn_factor(b, IndexSlot(k, INTERNAL, UP)),
            ),
        )
        validate_term(t)
        out = out + Expr((t,))
    return out


def parse_raw(text: str, table: SymbolTable) -> Expr:
    """Parse without canonicalizing (keeps the input's labels)."""
    return _Parser(text, table).parse()


def parse_expr(text: str, table: SymbolTable) -> Expr:
    """Parse ``text`` into a canonical :class:`Expr`."""
    return canonicalize(parse_raw(text, table), table)
