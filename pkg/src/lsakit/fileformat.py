"""The structure-constant text format.

    # comment
    lsa cayley2
    dim 2
    prod 1 1 : 1*e2
    prod 2 1 : 1*e1
    prod 2 2 : 2*e2

Indices are 1-based.  Coefficients are signed integers or ``p/q``.  Terms are
joined by ``+`` (a ``-`` separator is also accepted on input).  Unlisted
products are zero.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .lsa_core import Algebra

SYNTAX = "SYNTAX"
INDEX_OUT_OF_RANGE = "INDEX_OUT_OF_RANGE"
DUPLICATE_PRODUCT = "DUPLICATE_PRODUCT"
ZERO_DENOMINATOR = "ZERO_DENOMINATOR"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_INT = re.compile(r"[0-9]+")
_COEF = re.compile(r"([+-]?)([0-9]+)(?:/([0-9]+))?")
_WS = re.compile(r"[ \t]*")


class FormatError(ValueError):
    def __init__(self, code: str, line: int, col: int, msg: str):
        self.code, self.line, self.col = code, line, col
        super().__init__(f"{code}(line {line}, column {col}): {msg}")


class _Cursor:
    def __init__(self, text: str, lineno: int):
        self.s = text
        self.pos = 0
        self.lineno = lineno

    def err(self, msg: str, code: str = SYNTAX, col: int | None = None):
        raise FormatError(code, self.lineno, (self.pos if col is None else col) + 1, msg)

    def ws(self):
        self.pos = _WS.match(self.s, self.pos).end()

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.s)

    def expect(self, lit: str):
        self.ws()
        if not self.s.startswith(lit, self.pos):
            self.err(f"expected {lit!r}")
        self.pos += len(lit)

    def match(self, rx: re.Pattern, what: str):
        self.ws()
        m = rx.match(self.s, self.pos)
        if not m:
            self.err(f"expected {what}")
        self.pos = m.end()
        return m

    def int_(self, what: str) -> tuple[int, int]:
        self.ws()
        start = self.pos
        return int(self.match(_INT, what).group(0)), start

    def peek(self) -> str:
        self.ws()
        return self.s[self.pos] if self.pos < len(self.s) else ""


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_algebra_file(text: str) -> Algebra:
    """Parse the text format into an (unvalidated) Algebra."""
    name = None
    dim = None
    products: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).rstrip()
        if not body.strip():
            continue
        cur = _Cursor(body, lineno)
        cur.ws()
        start = cur.pos
        kw = cur.match(_IDENT, "keyword").group(0)
        if kw == "lsa":
            if name is not None:
                cur.err("repeated 'lsa' header", col=start)
            if dim is not None:
                cur.err("'lsa' must come before 'dim'", col=start)
            if cur.peek() == "":
                cur.err("expected identifier")
            name = cur.match(_IDENT, "identifier").group(0)
        elif kw == "dim":
            if name is None:
                cur.err("'dim' before 'lsa' header", col=start)
            if dim is not None:
                cur.err("repeated 'dim' header", col=start)
            dim, _ = cur.int_("dimension")
            if dim < 1:
                cur.err("dimension must be positive", col=start)
        elif kw == "prod":
            if dim is None:
                cur.err("'prod' before 'dim' header", col=start)
            i, ci = cur.int_("left index")
            j, cj = cur.int_("right index")
            for v, c in ((i, ci), (j, cj)):
                if not 1 <= v <= dim:
                    cur.err(f"index {v} outside 1..{dim}", INDEX_OUT_OF_RANGE, col=c)
            if (i, j) in products:
                cur.err(f"product {i} {j} given twice", DUPLICATE_PRODUCT, col=start)
            cur.expect(":")
            products[(i, j)] = _parse_terms(cur, dim)
        else:
            cur.err(f"unknown keyword {kw!r}", col=start)
        if not cur.at_end():
            cur.err("trailing characters")
    if name is None:
        raise FormatError(SYNTAX, 1, 1, "missing 'lsa <name>' header")
    if dim is None:
        raise FormatError(SYNTAX, 1, 1, "missing 'dim <n>' header")
    return Algebra.from_products(dim, name, products)


def _parse_terms(cur: _Cursor, dim: int) -> dict:
    terms: dict = {}
    sign = 1
    first = True
    while True:
        cur.ws()
        start = cur.pos
        m = cur.match(_COEF, "coefficient")
        s, num, den = m.group(1), int(m.group(2)), m.group(3)
        if den is not None and int(den) == 0:
            cur.err("zero denominator", ZERO_DENOMINATOR, col=start)
        coef = Fraction(num, int(den) if den else 1) * (-1 if s == "-" else 1) * sign
        cur.expect("*")
        cur.ws()
        if cur.peek() != "e":
            cur.err("expected e<k>")
        cur.pos += 1
        if not _INT.match(cur.s, cur.pos):
            cur.err("expected basis index after 'e'")
        k, ck = cur.int_("basis index")
        if not 1 <= k <= dim:
            cur.err(f"index {k} outside 1..{dim}", INDEX_OUT_OF_RANGE, col=ck - 1)
        if k in terms:
            cur.err(f"e{k} repeated in one product", col=ck - 1)
        terms[k] = coef
        first = False
        nxt = cur.peek()
        if nxt == "+":
            sign = 1
        elif nxt == "-":
            sign = -1
        else:
            break
        cur.pos += 1
    assert not first
    return terms


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize_algebra(A: Algebra) -> str:
    lines = [f"lsa {A.name}", f"dim {A.dim}"]
    for i in range(A.dim):
        for j in range(A.dim):
            v = A.c[i][j]
            terms = [f"{_fmt(c)}*e{k + 1}" for k, c in enumerate(v) if c]
            if terms:
                lines.append(f"prod {i + 1} {j + 1} : " + " + ".join(terms))
    return "\n".join(lines) + "\n"
