"""Independent oracles shared by the module tests and the acceptance suite."""
from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from fractions import Fraction as Q

from lsakit.lsa_core import Algebra, char_poly_lsa, validate_lsa
from lsakit.polyring import MPoly
from lsakit.qlinalg import QMatrix, det


def log_series(P: MPoly, degree: int) -> MPoly:
    """Taylor polynomial of log P at 0 up to ``degree`` (needs P(0) = 1)."""
    assert P.constant_term() == 1
    u = P.truncate(degree) - 1
    out = MPoly.zero(P.nvars)
    power = MPoly.const(P.nvars, 1)
    for m in range(1, degree + 1):
        power = (power * u).truncate(degree)
        out = out + power.scale(Q((-1) ** (m + 1), m))
    return out.truncate(degree)


def jet_lhs(logP: MPoly, idx) -> Q:
    """Mixed partial of log P at 0 along basis directions idx."""
    cnt = Counter(idx)
    e = tuple(cnt.get(i, 0) for i in range(logP.nvars))
    return logP.coeff(e) * math.prod(math.factorial(k) for k in cnt.values())


def jet_rhs(A: Algebra, idx, _cache=None) -> Q:
    """(-1)^k sum over orderings of tr(R(a_s1)...R(a_sk) R(a_0))."""
    cache = _cache if _cache is not None else {}
    if "R" not in cache:
        cache["R"] = [A.R_basis(i) for i in range(A.dim)]
    Rs = cache["R"]

    def word(w):
        if w not in cache:
            cache[w] = Rs[w[0]] if len(w) == 1 else word(w[:-1]) @ Rs[w[-1]]
        return cache[w]

    a0, rest = idx[0], idx[1:]
    R0 = Rs[a0]
    n = A.dim
    total = Q(0)
    for perm in set(itertools.permutations(rest)):
        M = word(perm)
        mult = sum(1 for p in itertools.permutations(rest) if p == perm)
        total += mult * sum(M[i, j] * R0[j, i] for i in range(n) for j in range(n) if M[i, j] and R0[j, i])
    return (-1) ** len(rest) * total


def helmstetter_mismatches(A: Algebra, kmax: int = 3) -> list:
    logP = log_series(char_poly_lsa(A), kmax + 1)
    bad = []
    cache: dict = {}
    for k in range(1, kmax + 1):
        for idx in itertools.combinations_with_replacement(range(A.dim), k + 1):
            # the identity is claimed for every a_0, so rotate which index plays a_0
            lhs = jet_lhs(logP, idx)
            for r in set(idx):
                rot = (r,) + tuple(sorted(idx[:idx.index(r)] + idx[idx.index(r) + 1:]))
                if lhs != jet_rhs(A, rot, cache):
                    bad.append(rot)
    return bad


def truncated_polynomial_algebra(c: list) -> Algebra:
    """t Q[t] / (t^5 - c1 t^4 - c2 t^3 - c3 t^2 - c4 t) in the basis t..t^4.

    Commutative and associative; c = 0 gives fili(4).
    """
    reduce = {5: [Q(0)] * 4}
    reduce[5] = [c[3], c[2], c[1], c[0]]  # coordinates of t^5 in t..t^4
    for p in range(6, 9):
        prev = reduce[p - 1]
        # t * (sum prev_k t^(k+1))
        shifted = [Q(0)] + prev[:3]
        reduce[p] = [s + prev[3] * r for s, r in zip(shifted, reduce[5])]

    def rule(i, j):
        p = i + j + 2
        if p <= 4:
            v = [Q(0)] * 4
            v[p - 1] = Q(1)
            return v
        return reduce[p]

    return Algebra.from_rule(4, "fili4_deformed", rule)


def random_invertible(rng: random.Random, n: int) -> QMatrix:
    while True:
        m = QMatrix(n, n, [Q(rng.randint(-2, 2)) for _ in range(n * n)])
        if det(m) != 0:
            return m


def fili4_perturbations(count: int = 50, seed: int = 2024) -> list:
    rng = random.Random(seed)
    out = []
    for s in range(count):
        c = [Q(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.7 else Q(0) for _ in range(4)]
        A = truncated_polynomial_algebra(c)
        B = random_invertible(rng, 4)
        A = A.change_basis([B.col(j) for j in range(4)], name=f"fili4_pert{s}")
        out.append(validate_lsa(A))
    return out
