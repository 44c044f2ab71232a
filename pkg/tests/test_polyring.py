from fractions import Fraction as Q

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lsakit.polyring import MPoly, PolyMatrix, PolyParseError, det_cofactor, parse_poly, poly_det
from lsakit.qlinalg import QMatrix, det

NV = 3
X = sympy.symbols("x1:4")


@st.composite
def polys(draw, nvars=NV, max_terms=5, max_deg=3):
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        e = tuple(draw(st.lists(st.integers(0, max_deg), min_size=nvars, max_size=nvars)))
        terms[e] = draw(st.fractions(min_value=-4, max_value=4, max_denominator=3))
    return MPoly(nvars, terms)


def to_sympy(p: MPoly):
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        m = sympy.Rational(c.numerator, c.denominator)
        for x, k in zip(X, e):
            m *= x**k
        out += m
    return sympy.expand(out)


def test_render_examples():
    x1, x2 = MPoly.var(2, 0), MPoly.var(2, 1)
    assert str(1 + 2 * x2 - x1**2) == "1 + 2*x2 - x1^2"
    assert str((x1**2).scale(Q(1, 2))) == "1/2*x1^2"
    assert str(MPoly.zero(2)) == "0"


def test_parse_examples():
    p = parse_poly("x3 - x1^2 - x2**2")
    assert p.nvars == 3
    assert p == MPoly.var(3, 2) - MPoly.var(3, 0) ** 2 - MPoly.var(3, 1) ** 2
    q = parse_poly("x1^3/3 - x1*x2 + x3")
    assert q.coeff((3, 0, 0)) == Q(1, 3)
    assert parse_poly("2*(x1 + 1)^2", nvars=2) == parse_poly("2 + 4*x1 + 2*x1^2", nvars=2)


@pytest.mark.parametrize("bad", ["x1 +", "x0", "(x1", "x1 ^ -1", "1/0", "y2", ""])
def test_parse_errors(bad):
    with pytest.raises((PolyParseError, ZeroDivisionError)):
        parse_poly(bad)


@given(polys())
def test_render_parse_roundtrip(p):
    assert parse_poly(str(p), nvars=NV) == p


@given(polys(), polys())
def test_ring_ops_match_sympy(p, q):
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))


@given(polys(), polys(), st.integers(0, NV - 1))
def test_leibniz(p, q, i):
    assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


@given(polys())
def test_hessian_symmetric(p):
    H = p.hessian()
    assert H == H.T


@given(polys(), polys())
def test_exact_div(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_div(q) == p


@given(polys(max_terms=3, max_deg=2), st.lists(polys(max_terms=2, max_deg=1), min_size=NV, max_size=NV),
       st.lists(st.integers(-2, 2), min_size=NV, max_size=NV))
def test_substitute_commutes_with_evaluation(p, images, pt):
    lhs = p.substitute(images).evaluate(pt)
    rhs = p.evaluate([g.evaluate(pt) for g in images])
    assert lhs == rhs


def test_substitute_affine_appends_t():
    p = parse_poly("x1^2 + x2", nvars=2)
    s = p.substitute_affine((1, 0))
    # (x1 + t)^2 + x2
    assert s == parse_poly("x1^2 + 2*x1*x3 + x3^2 + x2", nvars=3)


@st.composite
def poly_matrices(draw, n):
    return PolyMatrix(n, n, [draw(polys(max_terms=2, max_deg=1)) for _ in range(n * n)], NV)


@given(st.integers(1, 4).flatmap(poly_matrices))
def test_det_methods_agree(m):
    assert poly_det(m, "bareiss") == det_cofactor(m)


@given(st.integers(1, 3).flatmap(poly_matrices), st.lists(st.integers(-3, 3), min_size=NV, max_size=NV))
def test_det_commutes_with_evaluation(m, pt):
    assert poly_det(m).evaluate(pt) == det(m.evaluate(pt))


def test_det_of_constant_matrix():
    q = QMatrix.from_rows([[1, 2], [3, 4]])
    assert poly_det(PolyMatrix.from_qmatrix(q, 2)) == -2
