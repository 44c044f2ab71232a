"""Exact dense linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable
:class:`QMatrix` values; vectors are plain tuples of Fractions.  Subspaces are
kept as reduced row echelon bases (:class:`Subspace`) so two subspaces compare
equal exactly when they are the same subspace.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Q = Fraction

Vector = tuple  # tuple[Fraction, ...]


class DimensionError(ValueError):
    pass


def to_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass an int, Fraction or string")
    return Fraction(x)


def vec(xs: Iterable) -> Vector:
    return tuple(to_q(x) for x in xs)


def unit(n: int, i: int) -> Vector:
    return tuple(Q(1) if k == i else Q(0) for k in range(n))


def zero_vec(n: int) -> Vector:
    return (Q(0),) * n


def vadd(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Q(0))


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


class QMatrix:
    """Dense immutable rational matrix stored row-major."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        e = tuple(to_q(x) for x in entries)
        if len(e) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(e)}")
        self.rows = rows
        self.cols = cols
        self._e = e

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, (x for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int | None = None) -> "QMatrix":
        if not columns:
            return cls(nrows or 0, 0, ())
        return cls.from_rows(columns).T

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "QMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, entries: Sequence) -> "QMatrix":
        n = len(entries)
        return cls(n, n, (entries[i] if i == j else 0 for i in range(n) for j in range(n)))

    # access -------------------------------------------------------------
    @property
    def entries(self) -> tuple:
        return self._e

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self._e[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return self._e[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    # arithmetic ---------------------------------------------------------
    def _check_same(self, other: "QMatrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix(self.rows, self.cols, (a + b for a, b in zip(self._e, other._e)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix(self.rows, self.cols, (a - b for a, b in zip(self._e, other._e)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, (-a for a in self._e))

    def __mul__(self, c) -> "QMatrix":
        if isinstance(c, QMatrix):
            return self @ c
        c = to_q(c)
        return QMatrix(self.rows, self.cols, (c * a for a in self._e))

    __rmul__ = __mul__

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(dot(r, c) for c in cols)
        return QMatrix(self.rows, other.cols, out)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def __pow__(self, k: int) -> "QMatrix":
        if not self.is_square:
            raise DimensionError("power of non-square matrix")
        result = QMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Q(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self._e)

    def is_lower_triangular(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(i + 1, self.cols))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._e))

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}, {self.cols}, {[str(x) for x in self._e]})"

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows)) + "]"


def outer(u: Sequence, v: Sequence) -> QMatrix:
    return QMatrix(len(u), len(v), (a * b for a in u for b in v))


def commutator(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b - b @ a


# ----------------------------------------------------------------------------
# elimination


def _integer_rows(m: QMatrix) -> tuple[list[list[int]], int, int]:
    """Scale each row to integers; returns (rows, numerator, denominator) of the
    accumulated scale so that det(m) = det(rows) * num / den."""
    rows = []
    num, den = 1, 1
    for i in range(m.rows):
        r = m.row(i)
        lcm = 1
        for x in r:
            lcm = lcm * x.denominator // gcd(lcm, x.denominator)
        rows.append([int(x * lcm) for x in r])
        den *= lcm
    return rows, num, den


def det(m: QMatrix) -> Fraction:
    """Determinant by integer Bareiss elimination with full pivoting."""
    if not m.is_square:
        raise DimensionError(f"determinant of non-square {m.shape} matrix")
    n = m.rows
    if n == 0:
        return Q(1)
    a, _, den = _integer_rows(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        # full pivoting: smallest nonzero magnitude keeps intermediates small
        best = None
        for i in range(k, n):
            for j in range(k, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            return Q(0)
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
            ri = a[i]
            rk = a[k]
            for j in range(k + 1, n):
                num = ri[j] * p - aik * rk[j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss exact division failed"
                ri[j] = q
            ri[k] = 0
        prev = p
    return Fraction(sign * a[n - 1][n - 1], den)


def det_cofactor(m: QMatrix) -> Fraction:
    """Laplace expansion along the first row; reference implementation."""
    if not m.is_square:
        raise DimensionError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return Q(1)
    if n == 1:
        return m[0, 0]
    total = Q(0)
    for j in range(n):
        if m[0, j] == 0:
            continue
        minor = m.submatrix(range(1, n), [c for c in range(n) if c != j])
        total += (-1) ** j * m[0, j] * det_cofactor(minor)
    return total


def rref(m: QMatrix) -> tuple[QMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    a = m.tolist()
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        pr = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return QMatrix.from_rows(a) if nr else m, tuple(pivots)


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: QMatrix) -> list[Vector]:
    """Right null space basis in reduced echelon convention.

    One vector per free column f: it has a 1 in slot f, zeros in the other free
    slots, and the negated reduced entries in the pivot slots.
    """
    if m.rows == 0:
        return [unit(m.cols, j) for j in range(m.cols)]
    r, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * m.cols
        v[f] = Q(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(tuple(v))
    return basis


def solve(m: QMatrix, b: Sequence) -> Vector | None:
    """One solution of m x = b (free variables set to zero), or None."""
    if len(b) != m.rows:
        raise DimensionError("right-hand side length mismatch")
    aug = QMatrix(m.rows, m.cols + 1, (x for i in range(m.rows) for x in m.row(i) + (to_q(b[i]),)))
    r, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Q(0)] * m.cols
    for i, p in enumerate(pivots):
        x[p] = r[i, m.cols]
    return tuple(x)


def inverse(m: QMatrix) -> QMatrix:
    if not m.is_square:
        raise DimensionError("inverse of non-square matrix")
    n = m.rows
    aug = QMatrix(n, 2 * n, (x for i in range(n) for x in m.row(i) + unit(n, i)))
    r, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)) or len(pivots) > n and pivots[n] < n:
        raise ZeroDivisionError("singular matrix")
    return r.submatrix(range(n), range(n, 2 * n))


# ----------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n stored as its reduced row echelon basis."""

    n: int
    basis: tuple = ()

    @classmethod
    def span(cls, n: int, vectors: Iterable[Sequence]) -> "Subspace":
        vs = [vec(v) for v in vectors]
        if not vs:
            return cls(n, ())
        r, piv = rref(QMatrix.from_rows(vs))
        return cls(n, tuple(r.row(i) for i in range(len(piv))))

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit(n, i) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def contains(self, v: Sequence) -> bool:
        return Subspace.span(self.n, self.basis + (vec(v),)).dim == self.dim

    def contains_space(self, other: "Subspace") -> bool:
        return (self + other).dim == self.dim

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.n, self.basis + other.basis)

    def annihilator(self) -> list[Vector]:
        """Covectors vanishing on the subspace."""
        if not self.basis:
            return [unit(self.n, i) for i in range(self.n)]
        return kernel_basis(QMatrix.from_rows(self.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        rows = self.annihilator() + other.annihilator()
        if not rows:
            return Subspace.whole(self.n)
        return Subspace.span(self.n, kernel_basis(QMatrix.from_rows(rows)))

    def image(self, m: QMatrix) -> "Subspace":
        return Subspace.span(m.rows, (m.apply(b) for b in self.basis))

    def is_invariant(self, m: QMatrix) -> bool:
        return all(self.contains(m.apply(b)) for b in self.basis)

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of v with respect to ``basis`` (v must lie in the span)."""
        sol = solve(QMatrix.from_columns(self.basis, self.n), v)
        if sol is None:
            raise ValueError("vector not in subspace")
        return sol


def image_space(m: QMatrix) -> Subspace:
    return Subspace.span(m.rows, (m.col(j) for j in range(m.cols)))


def kernel_space(m: QMatrix) -> Subspace:
    return Subspace.span(m.cols, kernel_basis(m))


# ----------------------------------------------------------------------------
# univariate polynomials: coefficient tuples, lowest degree first


def upoly_trim(c: Sequence) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def upoly_eval(c: Sequence, t):
    acc = Q(0)
    for a in reversed(c):
        acc = acc * t + a
    return acc


def upoly_str(c: Sequence, var: str = "t") -> str:
    terms = []
    for d in range(len(c) - 1, -1, -1):
        a = c[d]
        if a == 0:
            continue
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        if mono and abs(a) == 1:
            s = mono
        elif mono:
            s = f"{abs(a)}*{mono}"
        else:
            s = str(abs(a))
        terms.append(("-" if a < 0 else "+", s))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sgn, s in terms[1:]:
        out += f" {sgn} {s}"
    return out


def charpoly(m: QMatrix) -> tuple:
    """Coefficients of det(tI - M), lowest degree first (Faddeev-LeVerrier)."""
    if not m.is_square:
        raise DimensionError("characteristic polynomial of non-square matrix")
    n = m.rows
    coeffs = [Q(0)] * (n + 1)
    coeffs[n] = Q(1)
    ident = QMatrix.identity(n)
    mk = QMatrix.zeros(n)
    for k in range(1, n + 1):
        mk = m @ (mk + coeffs[n - k + 1] * ident)
        coeffs[n - k] = -(mk.trace()) / k
    return tuple(coeffs)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _synthetic_div(c: Sequence, r) -> tuple:
    """Divide by (t - r); c lowest degree first; remainder must be zero."""
    n = len(c) - 1
    out = [Q(0)] * n
    acc = Q(0)
    for d in range(n, 0, -1):
        acc = acc * r + c[d]
        out[d - 1] = acc
    assert acc * r + c[0] == 0
    return tuple(out)


def rational_roots(c: Sequence) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities, ascending (rational root theorem)."""
    c = upoly_trim(vec(c))
    if len(c) <= 1:
        return []
    roots: list[tuple[Fraction, int]] = []
    zero_mult = 0
    while c[0] == 0:
        c = c[1:]
        zero_mult += 1
    if zero_mult:
        roots.append((Q(0), zero_mult))
    lcm = 1
    for a in c:
        lcm = lcm * a.denominator // gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in c]
    a0, an = ints[0], ints[-1]
    candidates = set()
    if len(c) > 1:
        for p in _divisors(a0):
            for q in _divisors(an):
                candidates.add(Fraction(p, q))
                candidates.add(Fraction(-p, q))
    for r in sorted(candidates):
        mult = 0
        while len(c) > 1 and upoly_eval(c, r) == 0:
            c = _synthetic_div(c, r)
            mult += 1
        if mult:
            roots.append((r, mult))
    roots.sort()
    return roots


@dataclass(frozen=True)
class EigenData:
    char_poly: tuple
    rational_roots: tuple  # ((root, algebraic multiplicity), ...)
    splits_over_Q: bool
    gen_eigenspaces: dict = field(hash=False, compare=False, default_factory=dict)
    nilpotent: bool = False

    @property
    def roots(self) -> list[Fraction]:
        return [r for r, _ in self.rational_roots]


def generalized_eigenspace(m: QMatrix, alpha) -> Subspace:
    n = m.rows
    shifted = m - to_q(alpha) * QMatrix.identity(n)
    return kernel_space(shifted ** n)


def rational_eigendata(m: QMatrix) -> EigenData:
    if not m.is_square:
        raise DimensionError("eigendata of non-square matrix")
    n = m.rows
    cp = charpoly(m)
    roots = tuple(rational_roots(cp))
    total = sum(k for _, k in roots)
    spaces = {r: generalized_eigenspace(m, r).basis for r, _ in roots}
    nilpotent = cp == tuple([Q(0)] * n + [Q(1)])
    return EigenData(cp, roots, total == n, spaces, nilpotent)


def fitting_decomposition(m: QMatrix) -> tuple[Subspace, Subspace]:
    """(null part, invertible part) of M: ker M^n and im M^n."""
    p = m ** m.rows
    return kernel_space(p), image_space(p)


def nilpotency_index(m: QMatrix) -> int | None:
    """Smallest k with M^k = 0, or None if M is not nilpotent."""
    n = m.rows
    p = QMatrix.identity(n)
    for k in range(1, n + 1):
        p = p @ m
        if p.is_zero():
            return k
    return None if n else 0
