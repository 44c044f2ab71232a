"""Exact checks of the Monge-Ampere identity det(Hess P + dP dP) = const and
a floating-point sampler for the affine flow of an LSA."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .lsa_core import Algebra, char_poly_lsa, trace_linear_forms
from .polyring import MPoly, PolyMatrix, outer_poly, poly_det
from .qlinalg import QMatrix, kernel_basis, to_q, vec

Q = Fraction
NOT_CONSTANT = "NOT_CONSTANT"


@dataclass(frozen=True)
class Axis:
    v: tuple
    lam: Fraction


def _affine_increment(P: MPoly, v: Sequence) -> Fraction | None:
    """lambda if P(x + t v) - P(x) = lambda t identically, else None."""
    n = P.nvars
    diff = P.substitute_affine(v) - P.extend(1)
    t_exp = (0,) * n + (1,)
    if any(e != t_exp for e in diff.terms):
        return None
    return diff.coeff(t_exp)


def axis_space(P: MPoly) -> list[tuple]:
    """Basis of {v : Hess P v = 0 identically}, reduced echelon convention."""
    n = P.nvars
    H = P.hessian()
    rows = {}
    for i in range(n):
        for j in range(n):
            for e, c in H[i, j].terms.items():
                rows.setdefault((i, e), [Q(0)] * n)[j] += c
    if not rows:
        return [tuple(Q(int(i == j)) for j in range(n)) for i in range(n)]
    return kernel_basis(QMatrix.from_rows(list(rows.values())))


def translational_axis(P: MPoly, candidate: Sequence | None = None) -> Axis | None:
    if candidate is not None:
        v = vec(candidate)
        if len(v) != P.nvars:
            raise ValueError("candidate length mismatch")
        lam = _affine_increment(P, v)
        return None if lam is None else Axis(v, lam)
    basis = axis_space(P)
    if not basis:
        return None
    grad = P.gradient()
    fallback = None
    for v in basis:
        dv = sum((g * c for g, c in zip(grad, v) if c), MPoly.zero(P.nvars))
        assert dv.is_constant(), "dP(v) must be constant on the axis space"
        lam = dv.constant_term()
        if lam:
            return Axis(tuple(c / lam for c in v), Q(1))
        fallback = fallback or Axis(tuple(v), Q(0))
    return fallback


def ma_matrix(P: MPoly, c=1) -> PolyMatrix:
    g = P.gradient()
    return P.hessian() + outer_poly(g, g).scale(c)


@dataclass
class MAReport:
    nvars: int
    axis: Axis | None
    det_poly: MPoly
    kappa: object  # Fraction or NOT_CONSTANT
    trace_condition_2L_n1R: bool | None = None
    euler_identity: bool | None = None

    @property
    def sign_of_kappa(self) -> int | None:
        if self.kappa == NOT_CONSTANT or self.kappa == 0:
            return None
        return 1 if self.kappa > 0 else -1


def ma_constant(P: MPoly, algebra: Algebra | None = None, r: Sequence | None = None,
                method: str = "auto") -> MAReport:
    Dp = poly_det(ma_matrix(P), method=method)
    kappa = Dp.constant_term() if Dp.is_constant() else NOT_CONSTANT
    rep = MAReport(P.nvars, translational_axis(P), Dp, kappa)
    if algebra is not None:
        n = algebra.dim
        trL, trR = trace_linear_forms(algebra)
        rep.trace_condition_2L_n1R = all(2 * a == (n + 1) * b for a, b in zip(trL, trR))
        if r is not None:
            rep.euler_identity = euler_check(algebra, P, r)
    return rep


def euler_check(A: Algebra, P: MPoly, r: Sequence) -> bool:
    """dP(E) = P for the field E_x = r + r x."""
    n = A.dim
    r = vec(r)
    Lr = A.L(r)
    E = [MPoly.linear(Lr.row(i), r[i]) for i in range(n)]
    grad = P.gradient()
    lhs = sum((g * e for g, e in zip(grad, E)), MPoly.zero(n))
    return lhs == P


@dataclass
class GraphRestriction:
    f: MPoly
    hessian_det: MPoly
    coordinate: int  # 0-based axis coordinate eliminated
    scale: Fraction  # c = v_k / lambda
    lam: Fraction

    def predicted(self, kappa: Fraction) -> Fraction:
        """H(f) expected from kappa: (-1)^m c^(m+2) kappa with m = nvars(f)."""
        m = self.f.nvars
        return (-1) ** m * self.scale ** (m + 2) * kappa


def graph_restrict(P: MPoly, axis: Axis | Sequence) -> GraphRestriction:
    """Write {P = 1} as the graph x_k = f(w) over W = {x_k = 0}.

    With P(x + t v) = P(x) + lambda t and k the coordinate where |v_k| is
    largest, f(w) = (v_k / lambda) (1 - P(w)).
    """
    if not isinstance(axis, Axis):
        ax = translational_axis(P, axis)
        if ax is None:
            raise ValueError("not a translational axis of P")
        axis = ax
    v, lam = axis.v, axis.lam
    if not any(v):
        raise ValueError("axis has no nonzero coordinate")
    if lam == 0:
        raise ValueError("axis increment must be nonzero")
    n = P.nvars
    k = max(range(n), key=lambda i: (abs(v[i]), -i))
    c = v[k] / lam
    m = n - 1
    images = []
    j = 0
    for i in range(n):
        if i == k:
            images.append(MPoly.zero(m))
        else:
            images.append(MPoly.var(m, j))
            j += 1
    restricted = P.substitute(images) if m else MPoly.const(0, P.evaluate((0,) * n))
    f = (1 - restricted).scale(c) if m else MPoly.const(0, 0)
    H = poly_det(f.hessian()) if m else MPoly.const(0, 1)
    return GraphRestriction(f, H, k, c, lam)


# ----------------------------------------------------------------------------
# flow sampler


@dataclass(frozen=True)
class FlowSample:
    a: tuple
    x0: tuple
    t: float
    endpoint: tuple
    character_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.character_residual <= self.tol


def _poly_arrays(P: MPoly):
    items = list(P.terms.items())
    exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), P.nvars)
    coeffs = np.array([float(c) for _, c in items], dtype=np.float64)
    return exps, coeffs


def flow_setup(A: Algebra, P: MPoly | None = None):
    n = A.dim
    P = P if P is not None else char_poly_lsa(A)
    Lb = np.array([[[float(x) for x in A.L_basis(i).row(r)] for r in range(n)] for i in range(n)])
    _, trR = trace_linear_forms(A)
    exps, coeffs = _poly_arrays(P)
    return Lb, np.array([float(x) for x in trR]), exps, coeffs


def flow_batch(A: Algebra, a_pts, x0_pts, ts, P: MPoly | None = None, backend: str | None = None):
    Lb, trR, exps, coeffs = flow_setup(A, P)
    return _kernels.flow_residuals(Lb, trR, exps, coeffs, np.atleast_2d(a_pts), np.atleast_2d(x0_pts),
                                   np.atleast_1d(ts), backend=backend)


def flow_sample(A: Algebra, a, x0, t: float, tol: float = 1e-9, P: MPoly | None = None,
                backend: str | None = None) -> FlowSample:
    """phi_t(x0) = exp(t [[L(a), a], [0, 0]]) (x0, 1) and the residual
    |P(phi_t(x0)) - e^{t trR(a)} P(x0)|."""
    a = np.asarray([float(to_q(x)) if not isinstance(x, float) else x for x in a])
    x0 = np.asarray([float(to_q(x)) if not isinstance(x, float) else x for x in x0])
    ends, res = flow_batch(A, a[None, :], x0[None, :], np.array([float(t)]), P=P, backend=backend)
    return FlowSample(tuple(a.tolist()), tuple(x0.tolist()), float(t), tuple(ends[0].tolist()), float(res[0]), tol)


def scaling_identity(P: MPoly, c) -> bool:
    """det(Hess P + c dP dP) = c det(Hess P + dP dP) as polynomials."""
    c = to_q(c)
    return poly_det(ma_matrix(P, c)) == poly_det(ma_matrix(P)).scale(c)
