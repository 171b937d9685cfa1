"""Octonionic calculus on polynomials in the 16 real coordinates.

Notation: ``d_i^a`` is the partial derivative in ``x_i^a``.

* ``d_bar_left(i, F)  = sum_a e_a (d_i^a F)``
* ``d_right(j, F)     = sum_a (d_j^a F) conj(e_a)``
* ``d_bar_right(k, F) = sum_a (d_k^a F) e_a``
* ``d_left(k, F)      = sum_a conj(e_a) (d_k^a F)``

The octonionic Hessian has entries ``d_bar_left(i, d_right(j, f))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from octoma.herm2 import HermMatrix2, OctMatrix2, OctVector2, det as hdet
from octoma.octonion import (E, MUL_INDEX, MUL_SIGN, Octonion, conj, doubling_frame, mul,
                             norm_sq)
from octoma.poly import NVARS, Poly, var_index

ZERO = Poly.zero()
_CONJ_SIGN = (1, -1, -1, -1, -1, -1, -1, -1)


class NotQuadratic(ValueError):
    pass


class NoRealCoordinate(ValueError):
    pass


class NotUnit(ValueError):
    pass


@dataclass(frozen=True)
class OctPoly:
    """Octonion-valued polynomial: eight real components."""

    c: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.c) != 8:
            raise ValueError("an OctPoly has 8 components")
        object.__setattr__(self, "c", tuple(self.c))

    @classmethod
    def real(cls, f: Poly) -> "OctPoly":
        return cls((f,) + (ZERO,) * 7)

    @classmethod
    def const(cls, q: Octonion) -> "OctPoly":
        return cls(tuple(Poly.const(v) for v in q.c))

    @classmethod
    def zero(cls) -> "OctPoly":
        return cls((ZERO,) * 8)

    def __add__(self, other: "OctPoly") -> "OctPoly":
        return OctPoly(tuple(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "OctPoly") -> "OctPoly":
        return OctPoly(tuple(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "OctPoly":
        return OctPoly(tuple(-a for a in self.c))

    def scale(self, s) -> "OctPoly":
        return OctPoly(tuple(a.scale(s) for a in self.c))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.c)

    def diff(self, n: int) -> "OctPoly":
        return OctPoly(tuple(a.diff(n) for a in self.c))

    def conj(self) -> "OctPoly":
        return OctPoly(tuple(a if k == 0 else -a for k, a in enumerate(self.c)))

    def evaluate(self, point: Sequence) -> Octonion:
        vals = [a(point) for a in self.c]
        backend = "float" if isinstance(point[0], float) else "exact"
        return Octonion([float(v) for v in vals] if backend == "float" else vals, backend=backend)

    def __str__(self):
        parts = [f"({a})*e{k}" for k, a in enumerate(self.c) if not a.is_zero()]
        return " + ".join(parts) if parts else "0"


def left_unit(p: int, F: OctPoly, conjugate: bool = False) -> OctPoly:
    """``e_p F`` (or ``conj(e_p) F``)."""
    out: list[Poly] = [ZERO] * 8
    s0 = _CONJ_SIGN[p] if conjugate else 1
    for j, f in enumerate(F.c):
        if f.is_zero():
            continue
        k = MUL_INDEX[p][j]
        s = s0 * MUL_SIGN[p][j]
        out[k] = out[k] + (f if s > 0 else -f)
    return OctPoly(tuple(out))


def right_unit(F: OctPoly, p: int, conjugate: bool = False) -> OctPoly:
    """``F e_p`` (or ``F conj(e_p)``)."""
    out: list[Poly] = [ZERO] * 8
    s0 = _CONJ_SIGN[p] if conjugate else 1
    for j, f in enumerate(F.c):
        if f.is_zero():
            continue
        k = MUL_INDEX[j][p]
        s = s0 * MUL_SIGN[j][p]
        out[k] = out[k] + (f if s > 0 else -f)
    return OctPoly(tuple(out))


def _as_oct(F) -> OctPoly:
    return F if isinstance(F, OctPoly) else OctPoly.real(F)


def _check_index(i: int) -> None:
    if i not in (1, 2):
        raise ValueError("octonionic variable index must be 1 or 2")


def d_bar_left(i: int, F) -> OctPoly:
    _check_index(i)
    F = _as_oct(F)
    out = OctPoly.zero()
    for a in range(8):
        out = out + left_unit(a, F.diff(var_index(i, a)))
    return out


def d_right(j: int, F) -> OctPoly:
    _check_index(j)
    F = _as_oct(F)
    out = OctPoly.zero()
    for a in range(8):
        out = out + right_unit(F.diff(var_index(j, a)), a, conjugate=True)
    return out


def d_bar_right(k: int, F) -> OctPoly:
    _check_index(k)
    F = _as_oct(F)
    out = OctPoly.zero()
    for a in range(8):
        out = out + right_unit(F.diff(var_index(k, a)), a)
    return out


def d_left(k: int, F) -> OctPoly:
    _check_index(k)
    F = _as_oct(F)
    out = OctPoly.zero()
    for a in range(8):
        out = out + left_unit(a, F.diff(var_index(k, a)), conjugate=True)
    return out


@dataclass(frozen=True)
class HermPolyMatrix:
    """``[[d1, q], [conj(q), d2]]`` with polynomial entries."""

    d1: Poly
    d2: Poly
    q: OctPoly

    def entry(self, i: int, j: int) -> OctPoly:
        if (i, j) == (1, 1):
            return OctPoly.real(self.d1)
        if (i, j) == (2, 2):
            return OctPoly.real(self.d2)
        if (i, j) == (1, 2):
            return self.q
        return self.q.conj()

    def evaluate(self, point: Sequence) -> HermMatrix2:
        q = self.q.evaluate(point)
        a, b = self.d1(point), self.d2(point)
        if q.is_float:
            a, b = float(a), float(b)
        return HermMatrix2(a, b, q)

    def diff(self, n: int) -> "HermPolyMatrix":
        return HermPolyMatrix(self.d1.diff(n), self.d2.diff(n), self.q.diff(n))

    def is_zero(self) -> bool:
        return self.d1.is_zero() and self.d2.is_zero() and self.q.is_zero()

    def __add__(self, other: "HermPolyMatrix") -> "HermPolyMatrix":
        return HermPolyMatrix(self.d1 + other.d1, self.d2 + other.d2, self.q + other.q)

    def __sub__(self, other: "HermPolyMatrix") -> "HermPolyMatrix":
        return HermPolyMatrix(self.d1 - other.d1, self.d2 - other.d2, self.q - other.q)

    @classmethod
    def const(cls, A: HermMatrix2) -> "HermPolyMatrix":
        return cls(Poly.const(A.a), Poly.const(A.b), OctPoly.const(A.q))

    def constant_value(self) -> HermMatrix2:
        return HermMatrix2(self.d1.constant_term(), self.d2.constant_term(),
                           Octonion([p.constant_term() for p in self.q.c]))

    def __str__(self):
        return f"[[{self.d1}, {self.q}], [conj, {self.d2}]]"


class HessianOrderMismatch(AssertionError):
    pass


def hess_oct(f: Poly, check: bool = True) -> HermPolyMatrix:
    """``(d_bar_left(i, d_right(j, f)))_{ij}``.

    With ``check`` the opposite operator order and the Hermitian symmetry are
    recomputed and compared; a mismatch raises :class:`HessianOrderMismatch`.
    """
    d = {j: d_right(j, f) for j in (1, 2)}
    h = {(i, j): d_bar_left(i, d[j]) for i in (1, 2) for j in (1, 2)}
    if check:
        db = {i: d_bar_left(i, f) for i in (1, 2)}
        for (i, j), v in h.items():
            if d_right(j, db[i]) != v:
                raise HessianOrderMismatch(f"operator orders differ in entry ({i},{j})")
        if h[2, 1] != h[1, 2].conj():
            raise HessianOrderMismatch("Hessian is not Hermitian")
        for i in (1, 2):
            if any(not p.is_zero() for p in h[i, i].c[1:]):
                raise HessianOrderMismatch("diagonal entry is not real")
    return HermPolyMatrix(h[1, 1].c[0], h[2, 2].c[0], h[1, 2])


def laplacian(i: int, f: Poly) -> Poly:
    _check_index(i)
    out = ZERO
    for a in range(8):
        n = var_index(i, a)
        out = out + f.diff(n).diff(n)
    return out


def second_derivative_along(f: Poly, v: Sequence) -> Poly:
    """``sum_mn v_m v_n d_m d_n f``."""
    out = ZERO
    grad = [f.diff(m) if v[m] else None for m in range(NVARS)]
    for m in range(NVARS):
        if not v[m]:
            continue
        for n in range(NVARS):
            if v[n]:
                out = out + grad[m].diff(n).scale(Fraction(v[m]) * Fraction(v[n]))
    return out


def _check_line_vector(z: OctVector2) -> None:
    if z.norm_sq() != 1:
        raise NotUnit("line direction must be a unit vector")
    if not (z.x1.is_real() or z.x2.is_real()):
        raise NoRealCoordinate("line direction needs a real coordinate")


def quad_hermpoly(z: OctVector2, H: HermPolyMatrix) -> Poly:
    """``Re(z* H z)`` for a constant rational vector ``z``."""
    out = H.d1.scale(norm_sq(z.x1)) + H.d2.scale(norm_sq(z.x2))
    for k in range(8):
        ck = mul(conj(z.x1), mul(E[k], z.x2)).c[0]
        if ck:
            out = out + H.q.c[k].scale(2 * ck)
    return out


def laplacian_line(z: OctVector2, f: Poly) -> Poly:
    """Laplacian of ``f`` restricted to the line through ``z``.

    Computed as ``Re(z* Hess_O(f) z)`` and again as ``sum_p d^2 f / d v_p^2``
    over the orthonormal frame ``v_p = z e_p``; the two must agree.
    """
    _check_line_vector(z)
    via_hessian = quad_hermpoly(z, hess_oct(f, check=False))
    via_frame = ZERO
    for p in range(8):
        v = z.right_mul(E[p]).coords()
        via_frame = via_frame + second_derivative_along(f, v)
    if via_hessian != via_frame:
        raise AssertionError("line Laplacian: Hessian and frame computations disagree")
    return via_hessian


# --- closed currents -----------------------------------------------------

def closed_current_residual(T: HermPolyMatrix) -> tuple[OctPoly, OctPoly]:
    """``(T12 d2<- - d1-> T22, T21 d1<- - d2-> T11)`` with barred derivatives."""
    r1 = d_bar_right(2, T.q) - d_bar_left(1, OctPoly.real(T.d2))
    r2 = d_bar_right(1, T.q.conj()) - d_bar_left(2, OctPoly.real(T.d1))
    return r1, r2


def _frame_substitution(f: Poly, frame) -> Poly:
    # table coordinate index[k] equals sign[k] times doubling coordinate k
    out: dict[tuple, Fraction] = {}
    for m, c in f.terms.items():
        new = [0] * NVARS
        s = 1
        for blk in (0, 8):
            for k, (idx, sign) in enumerate(frame):
                e = m[blk + idx]
                new[blk + k] = e
                if sign < 0 and e % 2:
                    s = -s
        out[tuple(new)] = c * s
    return Poly(out)


def to_doubling_coordinates(T: HermPolyMatrix) -> tuple[Poly, Poly, list[Poly]]:
    """``(T11, T22, T12^0..T12^7)`` rewritten in the Cayley-Dickson doubling basis."""
    frame = doubling_frame()
    d1 = _frame_substitution(T.d1, frame)
    d2 = _frame_substitution(T.d2, frame)
    comps = [_frame_substitution(T.q.c[idx], frame).scale(sign) for idx, sign in frame]
    return d1, d2, comps


def apply_linear_operator(Q: Sequence[Poly], fs: Sequence[Poly]) -> Poly:
    """``sum_j Q_j(d) f_j`` for linear forms ``Q_j`` read as first-order operators."""
    out = ZERO
    for q, f in zip(Q, fs):
        for m, c in q.terms.items():
            if sum(m) != 1:
                raise ValueError("operator entries must be linear forms")
            out = out + f.diff(m.index(1)).scale(c)
    return out


def closed_current_residual_scalar(T: HermPolyMatrix) -> list[Poly]:
    """The sixteen first-order scalar equations, one per kernel generator.

    They are written in the doubling basis of the kernel matrix, so ``T`` is
    rewritten there first (a signed permutation of coordinates).
    """
    from octoma.syzygy import reference_generators

    d1, d2, comps = to_doubling_coordinates(T)
    fs = [d1, d2] + comps
    return [apply_linear_operator(col, fs) for col in reference_generators()]


# --- Monge-Ampere polynomials -------------------------------------------

def herm_det_poly(H: HermPolyMatrix) -> Poly:
    out = H.d1 * H.d2
    for p in H.q.c:
        out = out - p * p
    return out


def herm_mixed_poly(H: HermPolyMatrix, K: HermPolyMatrix) -> Poly:
    out = H.d1 * K.d2 + H.d2 * K.d1
    for p, r in zip(H.q.c, K.q.c):
        out = out - (p * r).scale(2)
    return out.scale(Fraction(1, 2))


def ma_det(u: Poly) -> Poly:
    return herm_det_poly(hess_oct(u, check=False))


def ma_mixed(u: Poly, v: Poly) -> Poly:
    return herm_mixed_poly(hess_oct(u, check=False), hess_oct(v, check=False))


def divergence_coefficients(u: Poly) -> list[list[Poly]]:
    """Symmetric 16x16 coefficients ``a_mn`` with ``sum a_mn h_mn = 2 D(Hess u, Hess h)``."""
    U = hess_oct(u, check=False)
    a = [[ZERO] * NVARS for _ in range(NVARS)]
    for r in range(8):
        a[r][r] = U.d2
        a[8 + r][8 + r] = U.d1
    for s in range(8):
        col = right_unit(U.q, s)  # Re(conj(e_r) u12 e_s) is component r of u12 e_s
        for r in range(8):
            v = -col.c[r]
            a[r][8 + s] = v
            a[8 + s][r] = v
    return a


def divergence_defect_of(a: Sequence[Sequence[Poly]]) -> list[Poly]:
    return [sum((a[m][n].diff(m) for m in range(NVARS)), ZERO) for n in range(NVARS)]


def divergence_defect(u: Poly) -> list[Poly]:
    return divergence_defect_of(divergence_coefficients(u))


def apply_coefficients(a: Sequence[Sequence[Poly]], h: Poly) -> Poly:
    out = ZERO
    for m in range(NVARS):
        hm = h.diff(m)
        for n in range(NVARS):
            if not a[m][n].is_zero():
                out = out + a[m][n] * hm.diff(n)
    return out


def oct_laplacian(k: int, F: OctPoly) -> OctPoly:
    return OctPoly(tuple(laplacian(k, f) for f in F.c))


def psi_laplacian_identity(psi: OctPoly, k: int) -> tuple[OctPoly, OctPoly]:
    """Defects of ``Delta_k psi = (psi d_bar_k<-) d_k<- = (psi d_k<-) d_bar_k<-``."""
    _check_index(k)
    lap = oct_laplacian(k, psi)
    return (lap - d_right(k, d_bar_right(k, psi)),
            lap - d_bar_right(k, d_right(k, psi)))


# --- equivariance on quadratic forms ------------------------------------

def quadratic_matrix(f: Poly) -> list[list[Fraction]]:
    """Symmetric ``B`` with ``f = x^T B x + (lower order)``."""
    if f.degree() > 2:
        raise NotQuadratic("polynomial has degree above 2")
    B = [[Fraction(0)] * NVARS for _ in range(NVARS)]
    for m, c in f.terms.items():
        if sum(m) != 2:
            continue
        idx = [n for n in range(NVARS) for _ in range(m[n])]
        i, j = idx
        if i == j:
            B[i][i] += c
        else:
            B[i][j] += c / 2
            B[j][i] += c / 2
    return B


def quadratic_poly(B: Sequence[Sequence]) -> Poly:
    terms: dict[tuple, Fraction] = {}
    for i in range(NVARS):
        for j in range(NVARS):
            if B[i][j]:
                m = [0] * NVARS
                m[i] += 1
                m[j] += 1
                m = tuple(m)
                terms[m] = terms.get(m, 0) + Fraction(B[i][j])
    return Poly(terms)


def hessian_equivariance_defect(f: Poly, A: OctMatrix2) -> tuple:
    """``theta(d/dt f(exp(-tA) x)) - rho(A) theta(f)`` as a 10-vector.

    The left side goes through polynomials and :func:`hess_oct`; the right side
    through the closed-form ``theta`` and the 10x10 matrix of the action.
    """
    from octoma.lie import hat, rho_matrix
    from octoma.lines import QuadForm16, theta_map

    B = quadratic_matrix(f)
    H = hat(A)
    # derivative of x^T B x along x -> exp(-tA)x at t=0 is -x^T (H^T B + B H) x
    D = [[-sum(H[k][i] * B[k][j] + B[i][k] * H[k][j] for k in range(NVARS))
          for j in range(NVARS)] for i in range(NVARS)]
    lhs = hess_oct(quadratic_poly(D), check=False).constant_value().vector10()
    lhs = [v / 16 for v in lhs]
    R = rho_matrix(A)
    th = theta_map(QuadForm16(tuple(map(tuple, B)))).vector10()
    rhs = [sum(R[i][k] * th[k] for k in range(10)) for i in range(10)]
    return tuple(a - b for a, b in zip(lhs, rhs))


def hess_det_at(u: Poly, point: Sequence):
    return hdet(hess_oct(u, check=False).evaluate(point))
