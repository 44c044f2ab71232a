from fractions import Fraction as Q

import pytest
import sympy
from conftest import qmatrices, small_int, small_q
from hypothesis import given
from hypothesis import strategies as st

from lsakit.qlinalg import (
    DimensionError,
    QMatrix,
    Subspace,
    charpoly,
    det,
    det_cofactor,
    fitting_decomposition,
    generalized_eigenspace,
    inverse,
    kernel_basis,
    nilpotency_index,
    rank,
    rational_eigendata,
    rational_roots,
    rref,
    solve,
    to_q,
    upoly_eval,
)


def sym(m: QMatrix):
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for x in m.entries])


def test_to_q_accepts_strings_and_rejects_floats():
    assert to_q("3/4") == Q(3, 4)
    assert to_q(-2) == Q(-2)
    with pytest.raises((TypeError, ValueError)):
        to_q(0.1)


def test_det_small_known():
    m = QMatrix.from_rows([[2, 1], [7, 4]])
    assert det(m) == 1
    assert det(QMatrix.from_rows([[1, 2], [2, 4]])) == 0
    assert det(QMatrix.identity(5)) == 1


def test_det_requires_square():
    with pytest.raises(DimensionError):
        det(QMatrix.zeros(2, 3))


@given(qmatrices(max_n=5))
def test_det_matches_sympy(m):
    assert det(m) == Q(str(sym(m).det()))


@given(qmatrices(max_n=4))
def test_bareiss_equals_cofactor(m):
    assert det(m) == det_cofactor(m)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(qmatrices(n=n), qmatrices(n=n))))
def test_det_multiplicative(pair):
    a, b = pair
    assert det(a @ b) == det(a) * det(b)


@given(qmatrices(max_n=4, elements=small_int))
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(qmatrices(max_n=4))
def test_rank_matches_sympy(m):
    assert rank(m) == sym(m).rank()


@given(qmatrices(max_n=4))
def test_rref_is_reduced(m):
    r, piv = rref(m)
    for k, p in enumerate(piv):
        assert r[k, p] == 1
        assert all(r[i, p] == 0 for i in range(r.rows) if i != k)


@given(qmatrices(max_n=4))
def test_inverse_roundtrip(m):
    if det(m) == 0:
        with pytest.raises(ZeroDivisionError):
            inverse(m)
    else:
        assert inverse(m) @ m == QMatrix.identity(m.rows)


@given(qmatrices(max_n=4), st.lists(small_q, min_size=4, max_size=4))
def test_solve_consistent(m, b):
    b = b[: m.rows]
    x = solve(m, b)
    if x is not None:
        assert m.apply(x) == tuple(b)
    else:
        assert rank(m) < m.rows


@given(qmatrices(max_n=4))
def test_charpoly_matches_sympy(m):
    c = charpoly(m)
    t = sympy.Symbol("t")
    ref = sympy.Poly(sym(m).charpoly(t).as_expr(), t).all_coeffs()[::-1]
    assert list(c) == [Q(str(x)) for x in ref]


@given(qmatrices(max_n=4))
def test_cayley_hamilton(m):
    c = charpoly(m)
    acc = QMatrix.zeros(m.rows)
    power = QMatrix.identity(m.rows)
    for a in c:
        acc = acc + power * a
        power = power @ m
    assert acc.is_zero()


def test_rational_roots_with_multiplicity():
    # (t - 1/2)^2 (t + 3) (t^2 + 1)
    t = sympy.Symbol("t")
    p = sympy.Poly(sympy.expand((t - sympy.Rational(1, 2)) ** 2 * (t + 3) * (t**2 + 1)), t)
    c = [Q(str(x)) for x in p.all_coeffs()[::-1]]
    assert sorted(rational_roots(c)) == [(Q(-3), 1), (Q(1, 2), 2)]


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=1, max_size=4))
def test_rational_roots_recovers_product(roots):
    c = (Q(1),)
    for r in roots:
        c = tuple([Q(0)] + list(c))
        c = tuple(c[i] - r * (c[i + 1] if i + 1 < len(c) else 0) for i in range(len(c)))
    found = {r: k for r, k in rational_roots(c)}
    for r in set(roots):
        assert found[r] == roots.count(r)
        assert upoly_eval(c, r) == 0


def test_eigendata_jordan_block():
    m = QMatrix.from_rows([[2, 1, 0], [0, 2, 0], [0, 0, Q(1, 3)]])
    ed = rational_eigendata(m)
    assert ed.splits_over_Q
    assert dict(ed.rational_roots) == {Q(2): 2, Q(1, 3): 1}
    assert generalized_eigenspace(m, 2).dim == 2


def test_eigendata_irrational():
    ed = rational_eigendata(QMatrix.from_rows([[0, 1], [2, 0]]))
    assert not ed.splits_over_Q
    assert not ed.rational_roots


@given(qmatrices(max_n=4, elements=small_int))
def test_fitting_decomposition_is_complementary(m):
    k, im = fitting_decomposition(m)
    assert k.dim + im.dim == m.rows
    assert (k + im).dim == m.rows
    assert k.is_invariant(m) and im.is_invariant(m)


def test_nilpotency_index():
    n = QMatrix.from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert nilpotency_index(n) == 3
    assert nilpotency_index(QMatrix.identity(2)) is None
    assert nilpotency_index(QMatrix.zeros(2)) == 1


def test_subspace_lattice():
    a = Subspace.span(3, [(1, 0, 0), (0, 1, 0)])
    b = Subspace.span(3, [(0, 1, 0), (0, 0, 1)])
    assert a.intersect(b) == Subspace.span(3, [(0, 1, 0)])
    assert (a + b).dim == 3
    assert a.contains((3, -2, 0))
    assert not a.contains((0, 0, 1))
    assert a.coordinates((3, -2, 0)) == (Q(3), Q(-2))
    assert Subspace.span(3, [(1, 2, 3), (2, 4, 6)]).dim == 1


@given(st.lists(st.lists(small_int, min_size=3, max_size=3), min_size=0, max_size=3),
       st.lists(st.lists(small_int, min_size=3, max_size=3), min_size=0, max_size=3))
def test_subspace_dimension_formula(u, v):
    a, b = Subspace.span(3, u), Subspace.span(3, v)
    assert (a + b).dim + a.intersect(b).dim == a.dim + b.dim
