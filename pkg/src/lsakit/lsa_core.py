"""Algebras given by structure constants, the left-symmetry check, the
multiplication operators, trace form, characteristic polynomial, the
nilpotence series and the classification report."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

from .polyring import MPoly, PolyMatrix, poly_det
from .qlinalg import (
    QMatrix,
    Subspace,
    det,
    inverse,
    kernel_basis,
    rational_eigendata,
    to_q,
    unit,
    vec,
)

Q = Fraction
DEFAULT_MAX_DIM = 10


class LSAViolation(ValueError):
    """Left symmetry fails on a basis triple (1-based indices)."""

    def __init__(self, i: int, j: int, k: int, residual):
        self.i, self.j, self.k = i, j, k
        self.residual = tuple(residual)
        res = ", ".join(str(x) for x in self.residual)
        super().__init__(f"VIOLATION at ({i},{j},{k}): residual ({res})")


class DimensionCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Algebra:
    """``c[i][j]`` is the coordinate vector of e_{i+1} * e_{j+1}."""

    dim: int
    name: str
    c: tuple
    validated: bool = False

    @classmethod
    def from_rule(cls, n: int, name: str, rule: Callable[[int, int], Sequence]) -> "Algebra":
        """rule(i, j) gives the product of the 0-based basis vectors i and j."""
        return cls(n, name, tuple(tuple(vec(rule(i, j)) for j in range(n)) for i in range(n)))

    @classmethod
    def from_products(cls, n: int, name: str, products: Mapping) -> "Algebra":
        """products maps 1-based (i, j) to {k: coeff} (1-based k)."""
        table = [[[Q(0)] * n for _ in range(n)] for _ in range(n)]
        for (i, j), terms in products.items():
            for k, coef in terms.items():
                table[i - 1][j - 1][k - 1] += to_q(coef)
        return cls(n, name, tuple(tuple(tuple(v) for v in row) for row in table))

    @classmethod
    def trivial(cls, n: int, name: str | None = None) -> "Algebra":
        return cls.from_rule(n, name or f"trivial{n}", lambda i, j: (0,) * n)

    def product(self, i: int, j: int) -> tuple:
        return self.c[i][j]

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        n = self.dim
        out = [Q(0)] * n
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            row = self.c[i]
            for j in range(n):
                yj = y[j]
                if not yj:
                    continue
                s = xi * yj
                for k, ck in enumerate(row[j]):
                    if ck:
                        out[k] += s * ck
        return tuple(out)

    def bracket(self, x, y) -> tuple:
        return tuple(a - b for a, b in zip(self.mul(x, y), self.mul(y, x)))

    def L(self, x: Sequence) -> QMatrix:
        n = self.dim
        return QMatrix.from_columns([self.mul(x, unit(n, j)) for j in range(n)], n)

    def R(self, x: Sequence) -> QMatrix:
        n = self.dim
        return QMatrix.from_columns([self.mul(unit(n, i), x) for i in range(n)], n)

    def L_basis(self, i: int) -> QMatrix:
        return self.L(unit(self.dim, i))

    def R_basis(self, i: int) -> QMatrix:
        return self.R(unit(self.dim, i))

    def change_basis(self, basis: Sequence[Sequence], name: str | None = None) -> "Algebra":
        """Structure constants with respect to the columns of ``basis``."""
        n = self.dim
        P = QMatrix.from_columns([vec(b) for b in basis], n)
        Pinv = inverse(P)
        cols = [P.col(a) for a in range(n)]
        table = tuple(tuple(Pinv.apply(self.mul(cols[a], cols[b])) for b in range(n)) for a in range(n))
        return Algebra(n, name or self.name, table, False)

    def is_zero(self) -> bool:
        return all(not any(v) for row in self.c for v in row)

    def with_name(self, name: str) -> "Algebra":
        return replace(self, name=name)


def validate_lsa(A: Algebra) -> Algebra:
    """Check the associator is symmetric in its first two slots on every basis
    triple; raise :class:`LSAViolation` at the first failure."""
    n = A.dim
    if len(A.c) != n or any(len(r) != n or any(len(v) != n for v in r) for r in A.c):
        raise ValueError("structure constants do not have shape n x n x n")
    basis = [unit(n, i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            eij, eji = A.c[i][j], A.c[j][i]
            for k in range(n):
                a1 = A.mul(eij, basis[k])
                a2 = A.mul(basis[i], A.c[j][k])
                a3 = A.mul(eji, basis[k])
                a4 = A.mul(basis[j], A.c[i][k])
                res = tuple(w - x - y + z for w, x, y, z in zip(a1, a2, a3, a4))
                if any(res):
                    raise LSAViolation(i + 1, j + 1, k + 1, res)
    return replace(A, validated=True)


def is_lsa(A: Algebra) -> bool:
    try:
        validate_lsa(A)
    except LSAViolation:
        return False
    return True


def _require_valid(A: Algebra):
    if not A.validated:
        raise ValueError(f"algebra {A.name!r} has not been validated")


# ----------------------------------------------------------------------------
# operator fields


@dataclass(frozen=True)
class OperatorField:
    kind: str  # "L" or "R"
    entries: PolyMatrix

    def at(self, a: Sequence) -> QMatrix:
        return self.entries.evaluate(a)


@dataclass(frozen=True)
class MultOperators:
    algebra: Algebra
    Lfield: OperatorField
    Rfield: OperatorField
    trL: MPoly
    trR: MPoly

    def L(self, a) -> QMatrix:
        return self.algebra.L(vec(a))

    def R(self, a) -> QMatrix:
        return self.algebra.R(vec(a))


def mult_operators(A: Algebra) -> MultOperators:
    _require_valid(A)
    n = A.dim
    Lent, Rent = [], []
    for k in range(n):
        for j in range(n):
            Lent.append(MPoly.linear([A.c[i][j][k] for i in range(n)]))
    for k in range(n):
        for i in range(n):
            Rent.append(MPoly.linear([A.c[i][j][k] for j in range(n)]))
    Lf = PolyMatrix(n, n, Lent, n)
    Rf = PolyMatrix(n, n, Rent, n)
    return MultOperators(A, OperatorField("L", Lf), OperatorField("R", Rf), Lf.trace(), Rf.trace())


def trace_linear_forms(A: Algebra) -> tuple[tuple, tuple]:
    """(tr L, tr R) as coefficient vectors."""
    n = A.dim
    trL = tuple(sum((A.c[i][j][j] for j in range(n)), Q(0)) for i in range(n))
    trR = tuple(sum((A.c[i][j][i] for i in range(n)), Q(0)) for j in range(n))
    return trL, trR


@dataclass(frozen=True)
class TraceForm:
    matrix: QMatrix
    nondegenerate: bool
    determinant: Fraction


def trace_form(A: Algebra) -> TraceForm:
    _require_valid(A)
    n = A.dim
    Rs = [A.R_basis(i) for i in range(n)]
    tau = QMatrix(n, n, ((Rs[i] @ Rs[j]).trace() for i in range(n) for j in range(n)))
    _, trR = trace_linear_forms(A)
    for i in range(n):
        for j in range(n):
            alt = sum((a * b for a, b in zip(trR, A.c[i][j])), Q(0))
            if alt != tau[i, j]:
                raise AssertionError(f"trace form mismatch at ({i + 1},{j + 1}): {tau[i, j]} vs {alt}")
    d = det(tau)
    return TraceForm(tau, d != 0, d)


def char_poly_lsa(A: Algebra, max_dim: int = DEFAULT_MAX_DIM) -> MPoly:
    """P(x) = det(I + R(x))."""
    _require_valid(A)
    n = A.dim
    if n > max_dim:
        raise DimensionCapExceeded(f"dimension {n} exceeds cap {max_dim}")
    ops = mult_operators(A)
    M = PolyMatrix.identity(n, n) + ops.Rfield.entries
    return poly_det(M)


# ----------------------------------------------------------------------------
# subspaces built from products


def _product_span(A: Algebra, left: Subspace, right: Subspace) -> Subspace:
    return Subspace.span(A.dim, (A.mul(x, y) for x in left.basis for y in right.basis))


def _bracket_span(A: Algebra, left: Subspace, right: Subspace) -> Subspace:
    return Subspace.span(A.dim, (A.bracket(x, y) for x in left.basis for y in right.basis))


def derived_algebra(A: Algebra) -> Subspace:
    whole = Subspace.whole(A.dim)
    return _bracket_span(A, whole, whole)


def _iterate(start: Subspace, step) -> list[Subspace]:
    out = [start]
    while True:
        nxt = step(out[-1])
        if nxt == out[-1]:
            return out
        out.append(nxt)


@dataclass
class SeriesReport:
    lie_derived: list
    lie_lower_central: list
    rnil: list
    triv_ascending: list
    lie_solvable: bool
    lie_nilpotent: bool
    right_nilpotent: bool
    nilpotent: bool

    @staticmethod
    def dims(series) -> list[int]:
        return [s.dim for s in series]


def triv_series(A: Algebra) -> list[Subspace]:
    n = A.dim
    Ls = [A.L_basis(i) for i in range(n)]
    Rs = [A.R_basis(i) for i in range(n)]

    def step(prev: Subspace | None) -> Subspace:
        # z with L(z)e_j = R(e_j)z and R(z)e_j = L(e_j)z in prev for every j
        ann = prev.annihilator() if prev is not None else [unit(n, i) for i in range(n)]
        rows = []
        for phi in ann:
            for j in range(n):
                rows.append(tuple(sum((phi[k] * Rs[j][k, m] for k in range(n)), Q(0)) for m in range(n)))
                rows.append(tuple(sum((phi[k] * Ls[j][k, m] for k in range(n)), Q(0)) for m in range(n)))
        if not rows:
            return Subspace.whole(n)
        return Subspace.span(n, kernel_basis(QMatrix.from_rows(rows)))

    return _iterate(step(None), step)


def series(A: Algebra) -> SeriesReport:
    _require_valid(A)
    n = A.dim
    whole = Subspace.whole(n)
    derived = _iterate(whole, lambda s: _bracket_span(A, s, s))
    lower = _iterate(whole, lambda s: _bracket_span(A, whole, s))
    rnil = _iterate(whole, lambda s: _product_span(A, s, whole))
    triv = triv_series(A)
    return SeriesReport(
        lie_derived=derived,
        lie_lower_central=lower,
        rnil=rnil,
        triv_ascending=triv,
        lie_solvable=derived[-1].dim == 0,
        lie_nilpotent=lower[-1].dim == 0,
        right_nilpotent=rnil[-1].dim == 0,
        nilpotent=triv[-1].dim == n,
    )


# ----------------------------------------------------------------------------
# triangularization


NOT_SOLVABLE = "NOT_SOLVABLE"
IRRATIONAL_EIGENVALUES = "IRRATIONAL_EIGENVALUES"


@dataclass(frozen=True)
class TriangularizeResult:
    ok: bool
    basis: tuple = ()  # columns f_1..f_n; L(x) is lower triangular in this basis
    reason: str | None = None

    def __bool__(self):
        return self.ok


def _common_eigenvector(ops: list[QMatrix]) -> tuple | None:
    """A nonzero common eigenvector with rational eigenvalues, or None."""
    m = ops[0].rows if ops else 0
    if m == 0:
        return None
    eig = []
    for M in ops:
        ed = rational_eigendata(M)
        eig.append((M, [r for r, _ in ed.rational_roots]))
    eig.sort(key=lambda t: len(t[1]))
    memo: dict = {}

    def search(idx: int, space: Subspace):
        if space.dim == 0:
            return None
        if idx == len(eig):
            return space.basis[0]
        key = (idx, space.basis)
        if key in memo:
            return memo[key]
        M, roots = eig[idx]
        found = None
        for alpha in roots:
            shifted = M - alpha * QMatrix.identity(m)
            sub = space.intersect(Subspace.span(m, kernel_basis(shifted)))
            found = search(idx + 1, sub)
            if found is not None:
                break
        memo[key] = found
        return found

    return search(0, Subspace.whole(m))


def triangularize(A: Algebra, solvable: bool | None = None) -> TriangularizeResult:
    _require_valid(A)
    n = A.dim
    if solvable is None:
        solvable = series(A).lie_solvable
    if not solvable:
        return TriangularizeResult(False, reason=NOT_SOLVABLE)
    Ls = [A.L_basis(i) for i in range(n)]
    flag: list[tuple] = []  # flag[0] spans the bottom line
    for _ in range(n):
        W = Subspace.span(n, flag)
        # complement: standard basis vectors not in W, chosen greedily
        comp = []
        cur = W
        for i in range(n):
            e = unit(n, i)
            if not cur.contains(e):
                comp.append(e)
                cur = cur + Subspace.span(n, [e])
        full = QMatrix.from_columns(comp + list(flag), n)
        finv = inverse(full)
        m = len(comp)
        quot = []
        for L in Ls:
            img = finv @ L @ full
            quot.append(img.submatrix(range(m), range(m)))
        v = _common_eigenvector(quot)
        if v is None:
            return TriangularizeResult(False, reason=IRRATIONAL_EIGENVALUES)
        lift = tuple(sum((v[a] * comp[a][k] for a in range(m)), Q(0)) for k in range(n))
        flag.append(lift)
    basis = tuple(reversed(flag))
    assert check_flag(A, basis)
    return TriangularizeResult(True, basis=basis)


def check_flag(A: Algebra, basis: Sequence[Sequence]) -> bool:
    n = A.dim
    P = QMatrix.from_columns([vec(b) for b in basis], n)
    if det(P) == 0:
        return False
    Pinv = inverse(P)
    return all((Pinv @ A.L_basis(i) @ P).is_lower_triangular() for i in range(n))


# ----------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Flag:
    value: Any
    witness: Any = None

    def __bool__(self):
        return bool(self.value)


@dataclass
class ClassificationReport:
    is_lsa: Flag
    complete: Flag
    right_nil: Flag
    left_nil: Flag
    right_nilpotent: Flag
    nilpotent: Flag
    lie_solvable: Flag
    lie_nilpotent: Flag
    perfect: Flag
    trace_form_nondegenerate: Flag
    derived_codim: int
    derived_abelian: Flag
    ker_trR_unimodular: Flag
    triangularizable: Flag
    condition_2trL_eq_n1trR: Flag
    complete_by_charpoly: Flag | None = None
    complete_by_powers: Flag | None = None
    series: SeriesReport | None = field(default=None, repr=False)

    def items(self):
        keys = [
            "is_lsa", "complete", "right_nil", "left_nil", "right_nilpotent", "nilpotent",
            "lie_solvable", "lie_nilpotent", "perfect", "trace_form_nondegenerate",
            "derived_codim", "derived_abelian", "ker_trR_unimodular", "triangularizable",
            "condition_2trL_eq_n1trR",
        ]
        for k in keys:
            yield k, getattr(self, k)


def _nil_field(field_: PolyMatrix, n: int) -> Flag:
    """Whether the operator field raised to the n-th power vanishes identically."""
    p = field_ ** n
    for idx, entry in enumerate(p.entries):
        if not entry.is_zero():
            return Flag(False, {"entry": (idx // n + 1, idx % n + 1), "value": str(entry)})
    return Flag(True, {"power": n})


def _ker_trR_unimodular(A: Algebra, trR: tuple) -> Flag:
    """tr ad restricted to ker tr R (a Lie subalgebra containing [A,A])."""
    n = A.dim
    K = Subspace.span(n, kernel_basis(QMatrix.from_rows([trR])))
    traces = []
    for x in K.basis:
        # matrix of ad(x) on K in the basis K.basis
        cols = [K.coordinates(A.bracket(x, y)) for y in K.basis]
        traces.append(sum((cols[i][i] for i in range(len(cols))), Q(0)))
    bad = [i for i, t in enumerate(traces) if t]
    if bad:
        return Flag(False, {"vector": K.basis[bad[0]], "tr_ad": traces[bad[0]]})
    return Flag(True, {"basis_dim": K.dim})


def classify(A: Algebra, thorough: bool = False, max_dim: int = DEFAULT_MAX_DIM) -> ClassificationReport:
    _require_valid(A)
    n = A.dim
    ops = mult_operators(A)
    trL, trR = trace_linear_forms(A)
    sr = series(A)

    nonzero_tr = [i for i, c in enumerate(trR) if c]
    complete = Flag(not nonzero_tr, {"trR": str(ops.trR)} if not nonzero_tr else {"basis_index": nonzero_tr[0] + 1, "trR": trR[nonzero_tr[0]]})
    right_nil = _nil_field(ops.Rfield.entries, n)
    left_nil = _nil_field(ops.Lfield.entries, n)

    def series_flag(ok: bool, s: list) -> Flag:
        return Flag(ok, {"dims": SeriesReport.dims(s), "length": len(s)})

    d_alg = derived_algebra(A)
    products = _product_span(A, Subspace.whole(n), Subspace.whole(n))
    perfect = Flag(products.dim == n, {"product_span_dim": products.dim})
    derived_codim = n - d_alg.dim
    if n >= 1:
        assert derived_codim >= 1, "derived algebra of an LSA cannot be the whole algebra"
    derived_abelian = Flag(_bracket_span(A, d_alg, d_alg).dim == 0, {"derived_dim": d_alg.dim})

    tf = trace_form(A)
    if tf.nondegenerate:
        tfflag = Flag(True, {"det": tf.determinant})
    else:
        tfflag = Flag(False, {"kernel_vector": kernel_basis(tf.matrix)[0]})

    uni = _ker_trR_unimodular(A, trR)
    if tf.nondegenerate and nonzero_tr:
        # cross-check against the linear-form criterion
        r = principal_idempotent_vector(A, tf.matrix, trR)
        trRr = sum((a * b for a, b in zip(trR, r)), Q(0))
        trLr = sum((a * b for a, b in zip(trL, r)), Q(0))
        mu = tuple(trRr * a - trLr * b for a, b in zip(trL, trR))
        assert (not any(mu)) == uni.value, "unimodularity criteria disagree"
        uni = Flag(uni.value, dict(uni.witness, trR_r=trRr, trL_r=trLr))

    tri = triangularize(A, solvable=sr.lie_solvable)
    triflag = Flag(tri.ok, {"basis": tri.basis} if tri.ok else {"reason": tri.reason})

    mu = [2 * a - (n + 1) * b for a, b in zip(trL, trR)]
    bad = [i for i, m in enumerate(mu) if m]
    cond = Flag(not bad, {"trL": trL, "trR": trR} if not bad else {"basis_index": bad[0] + 1})

    report = ClassificationReport(
        is_lsa=Flag(True, {"checked_triples": n ** 3}),
        complete=complete,
        right_nil=right_nil,
        left_nil=left_nil,
        right_nilpotent=series_flag(sr.right_nilpotent, sr.rnil),
        nilpotent=series_flag(sr.nilpotent, sr.triv_ascending),
        lie_solvable=series_flag(sr.lie_solvable, sr.lie_derived),
        lie_nilpotent=series_flag(sr.lie_nilpotent, sr.lie_lower_central),
        perfect=perfect,
        trace_form_nondegenerate=tfflag,
        derived_codim=derived_codim,
        derived_abelian=derived_abelian,
        ker_trR_unimodular=uni,
        triangularizable=triflag,
        condition_2trL_eq_n1trR=cond,
        series=sr,
    )
    if thorough:
        P = char_poly_lsa(A, max_dim=max_dim)
        report.complete_by_charpoly = Flag(P == 1, {"P": str(P)})
        report.complete_by_powers = right_nil
        assert report.complete_by_charpoly.value == complete.value == right_nil.value
    return report


def principal_idempotent_vector(A: Algebra, tau: QMatrix, trR: Sequence) -> tuple:
    """The r with tau(r, .) = tr R; tau must be nondegenerate."""
    return inverse(tau).apply(trR)
