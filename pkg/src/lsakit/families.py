"""Concrete algebras and polynomial families used as the regression corpus."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .lsa_core import Algebra, char_poly_lsa, validate_lsa
from .polyring import MPoly
from .qlinalg import QMatrix, det, to_q

Q = Fraction


class IdentityFailed(ValueError):
    """A defining identity of the negeig construction does not hold."""

    def __init__(self, which: str):
        self.which = which
        super().__init__(f"IDENTITY_FAILED({which})")


def _vec(n, entries: dict):
    v = [Q(0)] * n
    for k, c in entries.items():
        v[k] += to_q(c)
    return v


def cayley(n: int) -> Algebra:
    """e_i e_j = e_{i+j} for i + j <= n, plus e_n e_j = j e_j."""
    if n < 1:
        raise ValueError("cayley(n) needs n >= 1")

    def rule(i, j):
        a, b = i + 1, j + 1
        v = {}
        if a + b <= n:
            v[a + b - 1] = 1
        if a == n:
            v[j] = v.get(j, 0) + b
        return _vec(n, v)

    return validate_lsa(Algebra.from_rule(n, f"cayley{n}", rule))


def fili(m: int) -> Algebra:
    if m < 1:
        raise ValueError("fili(m) needs m >= 1")
    return validate_lsa(Algebra.from_rule(
        m, f"fili{m}", lambda i, j: _vec(m, {i + j + 1: 1} if i + j + 2 <= m else {})))


def trivial(n: int) -> Algebra:
    return validate_lsa(Algebra.trivial(n))


def parab(g, n: int | None = None) -> Algebra:
    """x y = g(x,y) u, x u = 0, u x = x/2, u u = u; u is the last basis vector.

    ``g`` is a symmetric nondegenerate (n-1)x(n-1) matrix; an int m is short for
    the identity metric with n = m.
    """
    if isinstance(g, int):
        n = g
        g = QMatrix.identity(n - 1)
    elif not isinstance(g, QMatrix):
        g = QMatrix.from_rows(g)
    if n is None:
        n = g.rows + 1
    if g.shape != (n - 1, n - 1):
        raise ValueError(f"metric must be {n - 1}x{n - 1}")
    if g != g.T:
        raise ValueError("metric is not symmetric")
    if det(g) == 0:
        raise ValueError("metric is degenerate")
    u = n - 1

    def rule(i, j):
        if i < u and j < u:
            return _vec(n, {u: g[i, j]})
        if i < u:
            return _vec(n, {})
        if j < u:
            return _vec(n, {j: Q(1, 2)})
        return _vec(n, {u: 1})

    name = f"parab{n}" if g == QMatrix.identity(n - 1) else f"parab{n}g"
    return validate_lsa(Algebra.from_rule(n, name, rule))


SIX_DIM_PRODUCTS = {
    (6, 1): {1: Q(1, 4)},
    (6, 2): {2: Q(1, 4)},
    (6, 3): {3: Q(1, 2)},
    (6, 4): {4: Q(3, 4)},
    (6, 5): {5: Q(3, 4)},
    (6, 6): {6: 1},
    (3, 1): {5: 1},
    (3, 2): {5: 1},
    (1, 3): {5: 1},
    (2, 3): {4: 1, 5: 2},
    (4, 1): {6: 6},
    (1, 4): {6: 6},
    (5, 2): {6: 6},
    (2, 5): {6: 6},
    (3, 3): {6: 6},
}


def six_dim() -> Algebra:
    return validate_lsa(Algebra.from_products(6, "sixdim", SIX_DIM_PRODUCTS))


# ----------------------------------------------------------------------------
# negeig family


@dataclass(frozen=True)
class NegeigParams:
    n: int
    J: QMatrix
    D: QMatrix
    N: QMatrix
    alpha: Fraction = Q(1)

    def check(self):
        J, D, N = self.J, self.D, self.N
        for M in (J, D, N):
            if M.shape != (self.n, self.n):
                raise ValueError(f"parameter matrices must be {self.n}x{self.n}")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if D @ J + J @ D != J:
            raise IdentityFailed("DJ+JD!=J")
        if D @ N != N @ D:
            raise IdentityFailed("[D,N]!=0")
        if N.T @ J != -(J @ N):
            raise IdentityFailed("N^tJ!=-JN")


def negeig(params: NegeigParams, name: str = "negeig") -> Algebra:
    """x y = (x^ (D+N) y-bar, alpha x-bar^t J y-bar + x^ y^) on Q^n + Q."""
    params.check()
    n = params.n
    DN = params.D + params.N
    a = to_q(params.alpha)

    def rule(i, j):
        if i < n and j < n:
            return _vec(n + 1, {n: a * params.J[i, j]})
        if i < n:
            return _vec(n + 1, {})
        if j < n:
            return list(DN.col(j)) + [Q(0)]
        return _vec(n + 1, {n: 1})

    return validate_lsa(Algebra.from_rule(n + 1, name, rule))


def _antidiag(n: int) -> QMatrix:
    return QMatrix(n, n, (1 if i + j == n - 1 else 0 for i in range(n) for j in range(n)))


def sigma_params(sigma=2) -> NegeigParams:
    s = to_q(sigma)
    return NegeigParams(3, _antidiag(3), QMatrix.diag([s, Q(1, 2), 1 - s]), QMatrix.zeros(3), Q(1))


def jordan_params(t=1) -> NegeigParams:
    t = to_q(t)
    N = QMatrix.from_rows([[0, 0, 0], [t, 0, 0], [0, -t, 0]])
    return NegeigParams(3, _antidiag(3), QMatrix.identity(3) * Q(1, 2), N, Q(1))


def sigma_family(sigma=2) -> Algebra:
    return negeig(sigma_params(sigma), name=f"negeig_sigma{to_q(sigma)}".replace("/", "_"))


def jordan_family(t=1) -> Algebra:
    return negeig(jordan_params(t), name=f"negeig_jordan{to_q(t)}".replace("/", "_"))


def degenerate_negeig() -> Algebra:
    """The n = 2 example with singular D = diag(1, 0)."""
    p = NegeigParams(2, _antidiag(2), QMatrix.diag([1, 0]), QMatrix.zeros(2), Q(1))
    return negeig(p, name="negeig_degenerate")


def complex_numbers() -> Algebra:
    """C as a 2-dim real algebra: 1 = e1, i = e2.  L(e2) is a rotation."""
    return validate_lsa(Algebra.from_products(2, "complex", {
        (1, 1): {1: 1}, (1, 2): {2: 1}, (2, 1): {2: 1}, (2, 2): {1: -1}}))


# ----------------------------------------------------------------------------
# Eastwood-Ezhov polynomials


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _compositions_count(parts: tuple) -> int:
    counts: dict = {}
    for p in parts:
        counts[p] = counts.get(p, 0) + 1
    out = factorial(len(parts))
    for c in counts.values():
        out //= factorial(c)
    return out


def phi_partition_sum(n: int) -> MPoly:
    terms = {}
    for lam in _partitions(n):
        e = [0] * n
        for p in lam:
            e[p - 1] += 1
        terms[tuple(e)] = Q((-1) ** len(lam) * _compositions_count(lam), len(lam))
    return MPoly(n, terms)


@lru_cache(maxsize=None)
def phi_recursion(n: int) -> MPoly:
    if n == 1:
        return MPoly(1, {(1,): Q(-1)})
    acc = -MPoly.var(n, n - 1)
    for i in range(1, n):
        prev = phi_recursion(n - i).extend(i)
        acc = acc + MPoly.var(n, i - 1) * prev * (Q(i, n) - 1)
    return acc


@lru_cache(maxsize=None)
def cayley_recursion_poly(n: int) -> MPoly:
    """P_n from P_n - 1 = sum_i x_i (1 - P_{n-i}) + n x_n."""
    if n == 1:
        return MPoly(1, {(0,): 1, (1,): 1})
    acc = MPoly.const(n, 1) + MPoly.var(n, n - 1) * n
    for i in range(1, n):
        acc = acc + MPoly.var(n, i - 1) * (1 - cayley_recursion_poly(n - i).extend(i))
    return acc


def eastwood_ezhov(n: int, check_algebra: bool = True) -> MPoly:
    """Phi_n by the partition sum, cross-checked against the recursion and
    against 1 - P_n = n Phi_n."""
    if n < 1:
        raise ValueError("n >= 1 required")
    a = phi_partition_sum(n)
    b = phi_recursion(n)
    if a != b:
        raise AssertionError(f"Phi_{n}: partition sum and recursion disagree")
    P = char_poly_lsa(cayley(n)) if check_algebra else cayley_recursion_poly(n)
    if P - 1 != a.scale(-n):
        raise AssertionError(f"P_{n} - 1 != -{n} Phi_{n}")
    return a


# ----------------------------------------------------------------------------
# registry used by the CLI and the corpus


def corpus() -> list[Algebra]:
    """The builtin regression corpus."""
    out = [cayley(n) for n in range(1, 7)]
    out += [fili(m) for m in range(1, 6)]
    out += [parab(n) for n in range(2, 6)]
    out.append(six_dim())
    out += [sigma_family(2), sigma_family(Q(1, 3)), jordan_family(1), degenerate_negeig()]
    out += [trivial(n) for n in range(1, 5)]
    return out
