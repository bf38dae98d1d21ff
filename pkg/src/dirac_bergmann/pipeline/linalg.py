"""Exact Gaussian elimination over the rationals and the Gaussian rationals."""
from __future__ import annotations

from fractions import Fraction


class GaussRational:
    """``a + b i`` with rational parts; just enough arithmetic for elimination."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        o = _g(o)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _g(o)
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _g(o) - self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __mul__(self, o):
        o = _g(o)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _g(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return GaussRational((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        o = _g(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"({self.re}+{self.im}i)"


def _g(x) -> GaussRational:
    return x if isinstance(x, GaussRational) else GaussRational(x)


def row_reduce(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (copies input); returns ``(rref, pivot columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncol = len(m[0])
    piv = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], GaussRational) else GaussRational(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == len(m):
            break
    return m, piv


def rank(rows: list[list]) -> int:
    return len(row_reduce(rows)[1])


def left_nullspace(rows: list[list]) -> list[list]:
    """Basis of ``{v : v M = 0}``."""
    if not rows:
        return []
    n = len(rows)
    cols = len(rows[0])
    t = [[rows[i][j] for i in range(n)] for j in range(cols)]
    return nullspace(t, n)


def nullspace(rows: list[list], ncol: int | None = None) -> list[list]:
    """Basis of ``{v : M v = 0}``."""
    ncol = ncol if ncol is not None else (len(rows[0]) if rows else 0)
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncol)] for j in range(ncol)]
    m, piv = row_reduce(rows)
    free = [c for c in range(ncol) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncol
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -m[r][f]
        out.append(v)
    return out


def inverse(rows: list[list]) -> list[list]:
    n = len(rows)
    aug = [list(rows[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m, piv = row_reduce(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in m[:n]]


__all__ = ["GaussRational", "inverse", "left_nullspace", "nullspace", "rank", "row_reduce"]
