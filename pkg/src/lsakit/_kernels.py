"""Floating-point kernels for the flow sampler.

Two interchangeable implementations: numba ``@njit`` loops and plain numpy.
Set ``LSAKIT_NO_NUMBA=1`` to force the numpy path (it is also used when numba
cannot be imported).
"""
from __future__ import annotations

import math
import os

import numpy as np

_DISABLED = os.environ.get("LSAKIT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by LSAKIT_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

TAYLOR_TERMS = 20


# ----------------------------------------------------------------------------
# numpy reference path


def expm_np(M: np.ndarray) -> np.ndarray:
    """exp(M) by scaling and squaring with a truncated Taylor series."""
    M = np.asarray(M, dtype=np.float64)
    norm = np.abs(M).sum(axis=1).max() if M.size else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    A = M / (2.0 ** s)
    n = M.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, TAYLOR_TERMS + 1):
        term = term @ A / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def poly_eval_np(exps: np.ndarray, coeffs: np.ndarray, x: np.ndarray) -> float:
    if coeffs.size == 0:
        return 0.0
    return float(np.sum(coeffs * np.prod(x[None, :] ** exps, axis=1)))


def flow_residuals_np(Lb, trR, exps, coeffs, A, X0, T):
    """Residuals |P(phi_t(x0)) - exp(t trR(a)) P(x0)| for a batch of samples.

    Lb[i] is the matrix L(e_i); A, X0 are (B, n); T is (B,).
    Returns (endpoints (B, n), residuals (B,)).
    """
    B, n = A.shape
    ends = np.empty((B, n))
    res = np.empty(B)
    aug = np.zeros((n + 1, n + 1))
    for b in range(B):
        a = A[b]
        aug[:n, :n] = np.tensordot(a, Lb, axes=1)
        aug[:n, n] = a
        aug[n, :] = 0.0
        E = expm_np(T[b] * aug)
        y = E[:n, :n] @ X0[b] + E[:n, n]
        ends[b] = y
        res[b] = abs(poly_eval_np(exps, coeffs, y) - math.exp(T[b] * float(trR @ a)) * poly_eval_np(exps, coeffs, X0[b]))
    return ends, res


# ----------------------------------------------------------------------------
# numba path

if HAVE_NUMBA:

    @njit(cache=True)
    def _matmul(A, B):
        n, m = A.shape
        p = B.shape[1]
        C = np.zeros((n, p))
        for i in range(n):
            for k in range(m):
                a = A[i, k]
                if a != 0.0:
                    for j in range(p):
                        C[i, j] += a * B[k, j]
        return C

    @njit(cache=True)
    def expm_nb(M):
        n = M.shape[0]
        norm = 0.0
        for i in range(n):
            r = 0.0
            for j in range(n):
                r += abs(M[i, j])
            if r > norm:
                norm = r
        s = 0
        if norm > 0.5:
            s = int(math.ceil(math.log2(norm / 0.5)))
        A = M / (2.0 ** s)
        out = np.eye(n)
        term = np.eye(n)
        for k in range(1, TAYLOR_TERMS + 1):
            term = _matmul(term, A) / k
            out += term
        for _ in range(s):
            out = _matmul(out, out)
        return out

    @njit(cache=True)
    def poly_eval_nb(exps, coeffs, x):
        total = 0.0
        for t in range(coeffs.shape[0]):
            v = coeffs[t]
            for i in range(x.shape[0]):
                e = exps[t, i]
                for _ in range(e):
                    v *= x[i]
            total += v
        return total

    @njit(cache=True)
    def flow_residuals_nb(Lb, trR, exps, coeffs, A, X0, T):
        B, n = A.shape
        ends = np.empty((B, n))
        res = np.empty(B)
        for b in range(B):
            aug = np.zeros((n + 1, n + 1))
            tra = 0.0
            for i in range(n):
                ai = A[b, i]
                tra += trR[i] * ai
                aug[i, n] = T[b] * ai
                for r in range(n):
                    for c in range(n):
                        aug[r, c] += T[b] * ai * Lb[i, r, c]
            E = expm_nb(aug)
            for r in range(n):
                acc = E[r, n]
                for c in range(n):
                    acc += E[r, c] * X0[b, c]
                ends[b, r] = acc
            p_end = poly_eval_nb(exps, coeffs, ends[b])
            p_start = poly_eval_nb(exps, coeffs, X0[b])
            res[b] = abs(p_end - math.exp(T[b] * tra) * p_start)
        return ends, res


def use_numba() -> bool:
    return HAVE_NUMBA


def expm(M):
    M = np.ascontiguousarray(M, dtype=np.float64)
    return expm_nb(M) if HAVE_NUMBA else expm_np(M)


def flow_residuals(Lb, trR, exps, coeffs, A, X0, T, backend: str | None = None):
    """Dispatch to the numba kernel when available, else numpy.

    ``backend`` may be "numba" or "numpy" to override the default.
    """
    args = (
        np.ascontiguousarray(Lb, dtype=np.float64),
        np.ascontiguousarray(trR, dtype=np.float64),
        np.ascontiguousarray(exps, dtype=np.int64),
        np.ascontiguousarray(coeffs, dtype=np.float64),
        np.ascontiguousarray(A, dtype=np.float64),
        np.ascontiguousarray(X0, dtype=np.float64),
        np.ascontiguousarray(T, dtype=np.float64),
    )
    backend = backend or ("numba" if HAVE_NUMBA else "numpy")
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return flow_residuals_nb(*args)
    return flow_residuals_np(*args)
