"""Traceless octonionic 2x2 matrices acting on O^2 = R^16 and on H2(O) = R^10.

A generator ``A`` acts on vectors by ``xi -> A xi`` (:func:`hat`) and on
Hermitian matrices by ``X -> -A* X - X A`` (:func:`rho_matrix`). Group
elements only exist as evaluated words ``prod exp(t_k A_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from octoma.herm2 import (HermMatrix2, NotTraceless, OctMatrix2, OctVector2, act_generator,
                          matmul, vec_inner)
from octoma.lines import QuadForm16, j_map, theta_map
from octoma.octonion import Octonion, conj, left_matrix, mul


def _require_traceless(A: OctMatrix2) -> None:
    if not A.is_traceless():
        raise NotTraceless("diagonal entries do not sum to zero")


def hat(A: OctMatrix2) -> list[list]:
    """16x16 matrix of ``xi -> A xi``."""
    _require_traceless(A)
    blocks = [[left_matrix(A.m11), left_matrix(A.m12)], [left_matrix(A.m21), left_matrix(A.m22)]]
    out = []
    for bi in range(2):
        for p in range(8):
            out.append(blocks[bi][0][p] + blocks[bi][1][p])
    return out


def herm_basis(backend: str = "exact") -> list[HermMatrix2]:
    """Basis of H2(O) matching the coordinates ``(a, b, q^0..q^7)``."""
    out = []
    for k in range(10):
        v = [0] * 10
        v[k] = 1
        out.append(HermMatrix2.from_vector10(v, backend=backend))
    return out


def rho_matrix(A: OctMatrix2) -> list[list]:
    """10x10 matrix of ``X -> -A* X - X A`` in the basis of :func:`herm_basis`."""
    _require_traceless(A)
    cols = [act_generator(A, X).vector10() for X in herm_basis(A.backend)]
    return [[cols[j][i] for j in range(10)] for i in range(10)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*m)]


def t_map(xi: OctVector2, eta: OctVector2) -> HermMatrix2:
    """``(xi eta* + eta xi*) / 2``."""
    a = (mul(xi.x1, conj(eta.x1)) + mul(eta.x1, conj(xi.x1))).c[0]
    b = (mul(xi.x2, conj(eta.x2)) + mul(eta.x2, conj(xi.x2))).c[0]
    q = mul(xi.x1, conj(eta.x2)) + mul(eta.x1, conj(xi.x2))
    half = 0.5 if q.is_float else Fraction(1, 2)
    return HermMatrix2(a * half, b * half, q * half)


def outer(xi: OctVector2, eta: OctVector2) -> OctMatrix2:
    """The (non-Hermitian) matrix ``xi eta*``."""
    return OctMatrix2(mul(xi.x1, conj(eta.x1)), mul(xi.x1, conj(eta.x2)),
                      mul(xi.x2, conj(eta.x1)), mul(xi.x2, conj(eta.x2)))


def dual_check(A: OctMatrix2, xi: OctVector2, eta: OctVector2) -> tuple:
    """``(<xi, A eta>, <A* xi, eta>)``."""
    return vec_inner(xi, A.apply(eta)), vec_inner(A.star().apply(xi), eta)


def equiv_need_sides(A: OctMatrix2, xi: OctVector2) -> tuple[OctMatrix2, OctMatrix2]:
    """Both sides of ``(A*xi) xi* + xi (A*xi)* = A*(xi xi*) + (xi xi*) A``."""
    w = A.star().apply(xi)
    lhs = outer(w, xi) + outer(xi, w)
    P = outer(xi, xi)
    rhs = matmul(A.star(), P) + matmul(P, A)
    return lhs, rhs


def jjj_sides(X: HermMatrix2, A: OctMatrix2, xi: OctVector2) -> tuple:
    """``Re(xi* (XA) xi)`` and ``Re(xi* X (A xi))``."""
    lhs = vec_inner(xi, matmul(X, A).apply(xi))
    rhs = vec_inner(xi, X.as_oct().apply(A.apply(xi)))
    return lhs, rhs


def hat_dual(A: OctMatrix2) -> OctMatrix2:
    """The generator ``A*`` whose hat is the transpose of ``hat(A)``."""
    return A.star()


# --- group words ---------------------------------------------------------

@dataclass(frozen=True)
class GroupElem:
    """A word of generator exponentials, evaluated in both representations."""

    rep16: np.ndarray
    rep10: np.ndarray

    def apply(self, xi: OctVector2) -> OctVector2:
        v = self.rep16 @ np.array([float(c) for c in xi.coords()])
        return OctVector2.from_coords(list(map(float, v)), backend="float")

    def act(self, X: HermMatrix2) -> HermMatrix2:
        v = self.rep10 @ np.array([float(c) for c in X.vector10()])
        return HermMatrix2.from_vector10(list(map(float, v)), backend="float")


def _as_float_array(m) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in m], dtype=float)


def exp_word(word: Sequence[tuple[OctMatrix2, float]]) -> GroupElem:
    """``prod_k exp(t_k A_k)`` in word order (Pade scaling and squaring)."""
    g16 = np.eye(16)
    g10 = np.eye(10)
    for A, t in word:
        g16 = g16 @ expm(float(t) * _as_float_array(hat(A)))
        g10 = g10 @ expm(float(t) * _as_float_array(rho_matrix(A)))
    return GroupElem(g16, g10)


def pullback(B: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Matrix of ``x -> b(g^-1 x)``."""
    gi = np.linalg.inv(g)
    return gi.T @ B @ gi


def quadform_float(B: QuadForm16) -> np.ndarray:
    return _as_float_array(B.rows)


def action_via_forms(g: GroupElem, X: HermMatrix2) -> HermMatrix2:
    """``theta(j(X) o g^-1)``: the action on H2(O) computed through quadratic forms."""
    B = pullback(quadform_float(j_map(X.to_float() if not X.is_float else X)), g.rep16)
    sym = (B + B.T) / 2
    return theta_map(QuadForm16(tuple(tuple(float(v) for v in row) for row in sym)))


def random_generator(rng: np.random.Generator, scale: float = 1.0, backend: str = "float") -> OctMatrix2:
    """A traceless matrix with independent normal entries (``m22 = -m11``)."""
    def oct_():
        return Octonion([float(v) for v in rng.normal(0.0, scale, 8)], backend="float")
    a, b, c = oct_(), oct_(), oct_()
    return OctMatrix2(a, b, c, -a)
