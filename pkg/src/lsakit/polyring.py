"""Sparse multivariate polynomials over Q in variables x1..xn.

A polynomial is a map from exponent tuples to nonzero Fractions.  Rendering
uses graded-lex order: ascending total degree, and within a degree the
exponent tuples in descending lexicographic order, so ``x1^2`` comes before
``x1*x2`` which comes before ``x2^2``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .qlinalg import DimensionError, QMatrix, to_q

Q = Fraction


class PolyParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}")
        self.pos = pos


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _grlex_key(e: tuple):
    return (sum(e), e)


class MPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | None = None, *, _clean: bool = False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            t = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DimensionError(f"exponent {e} does not have {nvars} entries")
                c = to_q(c)
                if c:
                    t[e] = t.get(e, 0) + c
                    if not t[e]:
                        del t[e]
            self.terms = t
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls(nvars, {}, _clean=True)

    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        c = to_q(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        """The coordinate x_{i+1} (0-based index)."""
        if not 0 <= i < nvars:
            raise DimensionError(f"variable index {i} outside 0..{nvars - 1}")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Q(1)}, _clean=True)

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "MPoly":
        n = len(coeffs)
        t = {}
        if to_q(const):
            t[(0,) * n] = to_q(const)
        for i, c in enumerate(coeffs):
            c = to_q(c)
            if c:
                e = [0] * n
                e[i] = 1
                t[tuple(e)] = c
        return cls(n, t, _clean=True)

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise DimensionError(f"nvars mismatch {self.nvars} vs {other.nvars}")
            return other
        return MPoly.const(self.nvars, other)

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Q(0))

    def coeff(self, exp: Sequence) -> Fraction:
        return self.terms.get(tuple(exp), Q(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous(self, d: int) -> "MPoly":
        return MPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d}, _clean=True)

    def truncate(self, d: int) -> "MPoly":
        """Drop all terms of total degree > d."""
        return MPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= d}, _clean=True)

    def linear_part(self) -> list[Fraction]:
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.terms.get(tuple(e), Q(0)))
        return out

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), tuple(-k for k in ec[0])))

    def leading(self) -> tuple[tuple, Fraction]:
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "MPoly":
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return MPoly(self.nvars, t, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> "MPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MPoly":
        return self._lift(other) - self

    def scale(self, c) -> "MPoly":
        c = to_q(c)
        if not c:
            return MPoly.zero(self.nvars)
        return MPoly(self.nvars, {e: c * v for e, v in self.terms.items()}, _clean=True)

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._lift(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        t: dict = {}
        get = t.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                t[e] = get(e, 0) + c1 * c2
        return MPoly(self.nvars, {e: c for e, c in t.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "MPoly":
        if isinstance(c, MPoly):
            return self.exact_div(c)
        return self.scale(1 / to_q(c))

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, other: "MPoly") -> "MPoly":
        """Quotient of an exact division; asserts the remainder is zero."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if len(other.terms) == 1:
            (eb, cb), = other.terms.items()
            t = {}
            for e, c in self.terms.items():
                q = tuple(x - y for x, y in zip(e, eb))
                assert min(q, default=0) >= 0, "inexact polynomial division"
                t[q] = c / cb
            return MPoly(self.nvars, t, _clean=True)
        lb, cb = other.leading()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            le = max(rem, key=_grlex_key)
            lc = rem[le]
            q = tuple(x - y for x, y in zip(le, lb))
            assert min(q) >= 0, "inexact polynomial division"
            qc = lc / cb
            quot[q] = qc
            for e, c in other.terms.items():
                m = tuple(x + y for x, y in zip(e, q))
                v = rem.get(m, 0) - qc * c
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return MPoly(self.nvars, quot, _clean=True)

    # calculus -----------------------------------------------------------
    def diff(self, i: int) -> "MPoly":
        t = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                t[tuple(f)] = c * k
        return MPoly(self.nvars, t, _clean=True)

    def gradient(self) -> list["MPoly"]:
        return [self.diff(i) for i in range(self.nvars)]

    def hessian(self) -> "PolyMatrix":
        g = self.gradient()
        n = self.nvars
        ent = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                ent[i][j] = ent[j][i] = g[i].diff(j)
        return PolyMatrix.from_rows(ent)

    # evaluation and substitution ---------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} entries, expected {self.nvars}")
        pt = [to_q(p) for p in point]
        total = Q(0)
        for e, c in self.terms.items():
            v = c
            for p, k in zip(pt, e):
                if k:
                    v *= p ** k
            total += v
        return total

    def evaluate_float(self, point) -> float:
        total = 0.0
        for e, c in self.terms.items():
            v = float(c)
            for p, k in zip(point, e):
                if k:
                    v *= float(p) ** k
            total += v
        return total

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Replace x_i by images[i]; images share a common nvars."""
        if len(images) != self.nvars:
            raise DimensionError("need one image per variable")
        if not images:
            return self
        m = images[0].nvars
        powers: list[dict] = [{0: MPoly.const(m, 1)} for _ in images]

        def pw(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * images[i]
            return cache[k]

        total = MPoly.zero(m)
        for e, c in self.terms.items():
            term = MPoly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            total = total + term
        return total

    def extend(self, extra: int = 1) -> "MPoly":
        """Same polynomial viewed in nvars + extra variables."""
        pad = (0,) * extra
        return MPoly(self.nvars + extra, {e + pad: c for e, c in self.terms.items()}, _clean=True)

    def substitute_affine(self, direction: Sequence, t_symbolic: bool = True):
        """P(x + t v).  Symbolic t becomes the extra last variable; otherwise
        ``direction`` is added as a fixed shift and the result keeps nvars."""
        if len(direction) != self.nvars:
            raise DimensionError(f"direction has {len(direction)} entries, expected {self.nvars}")
        v = [to_q(c) for c in direction]
        if t_symbolic:
            m = self.nvars + 1
            t = MPoly.var(m, self.nvars)
            images = [MPoly.var(m, i) + t * v[i] for i in range(self.nvars)]
        else:
            images = [MPoly.var(self.nvars, i) + v[i] for i in range(self.nvars)]
        return self.substitute(images)

    # comparison & display ----------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MPoly({self.nvars}, '{self}')"

    def __str__(self) -> str:
        return render(self)


def render(p: MPoly, names: Sequence[str] | None = None) -> str:
    if p.is_zero():
        return "0"
    names = names or [f"x{i + 1}" for i in range(p.nvars)]
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((c < 0, body))
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


# ----------------------------------------------------------------------------
# parser for the rendering grammar

_TOKEN = re.compile(r"\s*(?:(\d+)|x(\d+)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            idx = int(m.group(2))
            if idx < 1:
                raise PolyParseError("variable indices start at 1", start)
            toks.append(("var", idx, start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    return toks


def parse_poly(text: str, nvars: int | None = None) -> MPoly:
    """Parse ``1 + 2*x2 - x1^2`` style expressions (also accepts parentheses)."""
    toks = _tokenize(text)
    if not toks:
        raise PolyParseError("empty expression", 0)
    top = max((v for kind, v, _ in toks if kind == "var"), default=0)
    n = top if nvars is None else nvars
    if top > n:
        raise DimensionError(f"x{top} used but nvars = {n}")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", None, len(text))

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr() -> MPoly:
        acc = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term() -> MPoly:
        acc = unary()
        while peek()[0] == "op" and peek()[1] in "*/":
            op, where = take()[1], peek()[2]
            rhs = unary()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant():
                    raise PolyParseError("division by a non-constant", where)
                if rhs.is_zero():
                    raise PolyParseError("division by zero", where)
                acc = acc.scale(1 / rhs.constant_term())
        return acc

    def unary() -> MPoly:
        if peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            p = unary()
            return -p if op == "-" else p
        return power()

    def power() -> MPoly:
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            kind, v, where = take()
            if kind != "num":
                raise PolyParseError("exponent must be a nonnegative integer", where)
            return base ** v
        return base

    def atom() -> MPoly:
        kind, v, where = take()
        if kind == "num":
            return MPoly.const(n, v)
        if kind == "var":
            return MPoly.var(n, v - 1)
        if kind == "op" and v == "(":
            p = expr()
            k2, v2, w2 = take()
            if not (k2 == "op" and v2 == ")"):
                raise PolyParseError("expected ')'", w2)
            return p
        raise PolyParseError("unexpected token" if kind != "end" else "unexpected end of input", where)

    result = expr()
    if pos != len(toks):
        raise PolyParseError("trailing input", toks[pos][2])
    return result


# ----------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    __slots__ = ("rows", "cols", "nvars", "_e")

    def __init__(self, rows: int, cols: int, entries: Iterable[MPoly], nvars: int | None = None):
        e = tuple(entries)
        if len(e) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(e)}")
        if e:
            nv = e[0].nvars
            if any(p.nvars != nv for p in e):
                raise DimensionError("entries disagree on nvars")
        elif nvars is None:
            raise DimensionError("empty matrix needs explicit nvars")
        else:
            nv = nvars
        self.rows, self.cols, self.nvars, self._e = rows, cols, nv, e

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MPoly]]) -> "PolyMatrix":
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, [p for r in rows for p in r])

    @classmethod
    def from_qmatrix(cls, m: QMatrix, nvars: int) -> "PolyMatrix":
        return cls(m.rows, m.cols, (MPoly.const(nvars, x) for x in m.entries), nvars)

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        return cls(n, n, (MPoly.const(nvars, 1 if i == j else 0) for i in range(n) for j in range(n)), nvars)

    @property
    def entries(self) -> tuple:
        return self._e

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij) -> MPoly:
        i, j = ij
        return self._e[i * self.cols + j]

    def row(self, i: int):
        return self._e[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[MPoly]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)), self.nvars)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return PolyMatrix(self.rows, self.cols, (a + b for a, b in zip(self._e, other._e)), self.nvars)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise DimensionError("shape mismatch")
        return PolyMatrix(self.rows, self.cols, (a - b for a, b in zip(self._e, other._e)), self.nvars)

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, (p.scale(c) for p in self._e), self.nvars)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = MPoly.zero(self.nvars)
                for k in range(self.cols):
                    a, b = self[i, k], other[k, j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                out.append(acc)
        return PolyMatrix(self.rows, other.cols, out, self.nvars)

    def __pow__(self, k: int) -> "PolyMatrix":
        result = PolyMatrix.identity(self.rows, self.nvars)
        for _ in range(k):
            result = result @ self
        return result

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self._e)

    def trace(self) -> MPoly:
        acc = MPoly.zero(self.nvars)
        for i in range(min(self.rows, self.cols)):
            acc = acc + self[i, i]
        return acc

    def evaluate(self, point: Sequence) -> QMatrix:
        return QMatrix(self.rows, self.cols, (p.evaluate(point) for p in self._e))

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash((self.shape, self._e))

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(p) for p in self.row(i)) for i in range(self.rows)) + "]"


def outer_poly(u: Sequence[MPoly], v: Sequence[MPoly]) -> PolyMatrix:
    return PolyMatrix(len(u), len(v), (a * b for a in u for b in v))


def det_cofactor(m: PolyMatrix) -> MPoly:
    """Laplace expansion along rows with memoized column-subset minors.

    No division is used, so this is an independent check on :func:`poly_det`.
    """
    if m.rows != m.cols:
        raise DimensionError(f"determinant of non-square {m.shape} matrix")
    n = m.rows
    one = MPoly.const(m.nvars, 1)
    # minors[cols] = det of the last len(cols) rows restricted to cols
    minors = {(): one}
    for size in range(1, n + 1):
        r = n - size
        nxt = {}
        for cols in combinations(range(n), size):
            acc = MPoly.zero(m.nvars)
            for pos, c in enumerate(cols):
                a = m[r, c]
                if a.is_zero():
                    continue
                sub = minors[cols[:pos] + cols[pos + 1:]]
                if sub.is_zero():
                    continue
                term = a * sub
                acc = acc - term if pos % 2 else acc + term
            nxt[cols] = acc
        minors = nxt
    return minors[tuple(range(n))]


def poly_det(m: PolyMatrix, method: str = "auto") -> MPoly:
    """Exact determinant of a square polynomial matrix.

    ``auto`` uses cofactor expansion up to 4x4 and fraction-free Bareiss
    elimination (exact division by the previous pivot) beyond that.
    """
    if m.rows != m.cols:
        raise DimensionError(f"determinant of non-square {m.shape} matrix")
    n = m.rows
    if method == "cofactor" or (method == "auto" and n <= 4):
        return det_cofactor(m)
    if method not in ("auto", "bareiss"):
        raise ValueError(f"unknown method {method!r}")
    if n == 0:
        return MPoly.const(m.nvars, 1)
    a = m.tolist()
    sign = 1
    prev = MPoly.const(m.nvars, 1)
    for k in range(n - 1):
        # pivot: nonzero entry with fewest terms, then lowest degree
        best = None
        for i in range(k, n):
            for j in range(k, n):
                p = a[i][j]
                if p.terms:
                    key = (len(p.terms), p.degree())
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            return MPoly.zero(m.nvars)
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * p
                if aik.terms and a[k][j].terms:
                    num = num - aik * a[k][j]
                a[i][j] = num.exact_div(prev) if num.terms else num
            a[i][k] = MPoly.zero(m.nvars)
        prev = p
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d
