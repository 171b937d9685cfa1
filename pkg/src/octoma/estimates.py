"""Pointwise inequalities and identities behind the a priori estimates.

Everything here returns the two sides of a relation so that callers (tests and
the ``verify`` command) decide on tolerances. Quantities built from rational
polynomials at rational points are computed exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from octoma.herm2 import (HermMatrix2, NotPositiveDefinite, det, inverse, is_positive_definite,
                          matmul, re_trace)
from octoma.octonion import E, Octonion, inner, mul, norm_sq
from octoma.poly import NVARS, Poly, var_index
from octoma.polycalc import HermPolyMatrix, hess_oct, second_derivative_along


class NotDiagonal(ValueError):
    pass


def re_tr_product(X: HermMatrix2, Y: HermMatrix2):
    """``Re Tr(X Y) = x11 y11 + x22 y22 + 2 <x12, y12>`` for Hermitian ``X, Y``."""
    return X.a * Y.a + X.b * Y.b + 2 * inner(X.q, Y.q)


def trace_bound_sides(A: HermMatrix2, B: HermMatrix2) -> tuple[float, float]:
    """``tr(A^-1 (A - B))`` and ``(2 / sqrt det A)(sqrt det A - sqrt det B)`` for ``A, B > 0``."""
    if not (is_positive_definite(A) and is_positive_definite(B)):
        raise NotPositiveDefinite("both matrices must be positive definite")
    A, B = A.to_float(), B.to_float()
    lhs = re_tr_product(inverse(A), A - B)
    dA, dB = math.sqrt(det(A)), math.sqrt(det(B))
    return lhs, 2.0 / dA * (dA - dB)


def trace_square(A: HermMatrix2, B: HermMatrix2):
    """``Re Tr((A^-1 B)(A^-1 B))`` with full octonionic products; ``>= 0`` when ``A > 0``."""
    if not is_positive_definite(A):
        raise NotPositiveDefinite("first matrix must be positive definite")
    M = matmul(inverse(A), B)
    return re_trace(matmul(M, M))


def _eval_herm(H: HermPolyMatrix, point) -> HermMatrix2:
    return H.evaluate(point)


def _entry_norm_sq(H: HermPolyMatrix, k: int, i: int, point):
    if k == i:
        v = (H.d1 if k == 1 else H.d2)(point)
        return v * v
    return sum(p(point) ** 2 for p in H.q.c)


def elementary_inequality_sides(u: Poly, point: Sequence) -> tuple[Fraction, Fraction]:
    """Both sides of the elementary inequality at a point where ``Hess_O u`` is diagonal.

    left  = sum_{p,i,k} (d_{x_i^p} u_kk)^2 / (u_ii u_kk)
    right = 4 sum_{p,i,k,l} |d_{x_l^p} u_ki|^2 / (u_ii u_kk)
    """
    U = hess_oct(u, check=False)
    at = U.evaluate(point)
    if any(at.q.c):
        raise NotDiagonal("Hessian is not diagonal at the point")
    if not is_positive_definite(at):
        raise NotPositiveDefinite("Hessian is not positive definite at the point")
    diag = {1: at.a, 2: at.b}
    derivs = {n: U.diff(n) for n in range(NVARS)}
    lhs = Fraction(0)
    rhs = Fraction(0)
    for p in range(8):
        for i in (1, 2):
            for k in (1, 2):
                w = diag[i] * diag[k]
                dk = derivs[var_index(i, p)]
                lhs += _entry_norm_sq(dk, k, k, point) / w
                for l in (1, 2):
                    rhs += 4 * _entry_norm_sq(derivs[var_index(l, p)], k, i, point) / w
    return lhs, rhs


def _det_poly(H: HermPolyMatrix) -> Poly:
    out = H.d1 * H.d2
    for p in H.q.c:
        out = out - p * p
    return out


def _herm_from_polys(a: Poly, b: Poly, q: Sequence[Poly], point) -> HermMatrix2:
    return HermMatrix2(a(point), b(point), Octonion([p(point) for p in q]))


def _second_along(H: HermPolyMatrix, v) -> tuple[Poly, Poly, list[Poly]]:
    return (second_derivative_along(H.d1, v), second_derivative_along(H.d2, v),
            [second_derivative_along(p, v) for p in H.q.c])


def _first_along(f: Poly, v) -> Poly:
    out = Poly.zero()
    for m in range(NVARS):
        if v[m]:
            out = out + f.diff(m).scale(Fraction(v[m]))
    return out


def line_frame(slope: Octonion | None) -> tuple[list[list[Fraction]], Fraction]:
    """Spanning vectors ``w_p = (e_p, a e_p)`` of the line and ``|w_p|^2`` (common value).

    ``slope=None`` is the line at infinity. The ``w_p`` are orthogonal, so
    ``Delta_L = (1/|w|^2) sum_p d^2/dw_p^2``.
    """
    frame = []
    for p in range(8):
        if slope is None:
            frame.append([Fraction(0)] * 8 + [Fraction(int(r == p)) for r in range(8)])
        else:
            w2 = mul(slope, E[p])
            frame.append([Fraction(int(r == p)) for r in range(8)] + list(w2.c))
    n2 = Fraction(1) if slope is None else 1 + norm_sq(slope)
    return frame, n2


def delta_L_sides(u: Poly, point: Sequence, slope: Octonion | None) -> tuple[Fraction, Fraction]:
    """``tr(U^-1 Delta_L U)`` and ``Delta_L log det U`` at a point where ``U = Hess_O u > 0``."""
    U = hess_oct(u, check=False)
    at = U.evaluate(point)
    if not is_positive_definite(at):
        raise NotPositiveDefinite("u is not strictly oPSH at the point")
    F = _det_poly(U)
    Fv = F(point)
    frame, n2 = line_frame(slope)
    Uinv = inverse(at)
    lhs = Fraction(0)
    rhs = Fraction(0)
    for w in frame:
        a, b, q = _second_along(U, w)
        lhs += re_tr_product(Uinv, _herm_from_polys(a, b, q, point))
        F1 = _first_along(F, w)(point)
        F2 = second_derivative_along(F, w)(point)
        rhs += F2 / Fv - (F1 / Fv) ** 2
    return lhs / n2, rhs / n2


def fourth_order_sides(u: Poly, point: Sequence) -> tuple[Fraction, Fraction]:
    """``Tr(U^-1 Delta U) - sum Tr(U^-1 U_x U^-1 U_x)`` and ``Delta log det U`` (flat Laplacian)."""
    U = hess_oct(u, check=False)
    at = U.evaluate(point)
    if not is_positive_definite(at):
        raise NotPositiveDefinite("u is not strictly oPSH at the point")
    Uinv = inverse(at)
    F = _det_poly(U)
    Fv = F(point)
    lhs = Fraction(0)
    rhs = Fraction(0)
    for n in range(NVARS):
        Un = U.diff(n)
        Unn = Un.diff(n)
        lhs += re_tr_product(Uinv, Unn.evaluate(point))
        M = matmul(Uinv, Un.evaluate(point))
        lhs -= re_trace(matmul(M, M))
        Fn = F.diff(n)
        rhs += Fn.diff(n)(point) / Fv - (Fn(point) / Fv) ** 2
    return lhs, rhs
