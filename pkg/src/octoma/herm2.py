"""Octonionic 2x2 matrices: Hermitian ones and general ones.

A Hermitian matrix is stored as ``(a, b, q)`` meaning ``[[a, q], [conj(q), b]]``.
Matrix products of octonion matrices are taken entrywise with the octonion
product; whenever an identity needs a particular bracketing, the caller
builds it from :func:`matmul` explicitly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from octoma.octonion import (Octonion, OctonionParseError, conj, format_octonion, im, inner, mul,
                             norm_sq, parse_octonion, re as ore)


class SingularMatrix(ArithmeticError):
    pass


class NotPositiveDefinite(ValueError):
    pass


class NotTraceless(ValueError):
    pass


class InexactSqrt(ArithmeticError):
    pass


def exact_sqrt(x: Fraction) -> Fraction:
    """Square root of a rational that is a perfect square, else :class:`InexactSqrt`."""
    x = Fraction(x)
    if x < 0:
        raise InexactSqrt(f"negative radicand {x}")
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise InexactSqrt(f"{x} is not a rational square")
    return Fraction(rn, rd)


def _sqrt(x, is_float: bool):
    return math.sqrt(x) if is_float else exact_sqrt(x)


def _zero(is_float: bool):
    return 0.0 if is_float else Fraction(0)


def _real_oct(x, backend: str) -> Octonion:
    return Octonion.real(x, backend=backend)


@dataclass(frozen=True)
class OctVector2:
    """A column ``(x1, x2)`` of two octonions."""

    x1: Octonion
    x2: Octonion

    def __post_init__(self):
        self.x1._check(self.x2)

    @property
    def backend(self) -> str:
        return self.x1.backend

    def __iter__(self) -> Iterator[Octonion]:
        yield self.x1
        yield self.x2

    def __getitem__(self, i: int) -> Octonion:
        return (self.x1, self.x2)[i]

    def __add__(self, other: "OctVector2") -> "OctVector2":
        return OctVector2(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other: "OctVector2") -> "OctVector2":
        return OctVector2(self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self) -> "OctVector2":
        return OctVector2(-self.x1, -self.x2)

    def scale(self, s) -> "OctVector2":
        return OctVector2(self.x1 * s, self.x2 * s)

    def right_mul(self, u: Octonion) -> "OctVector2":
        return OctVector2(mul(self.x1, u), mul(self.x2, u))

    def norm_sq(self):
        return norm_sq(self.x1) + norm_sq(self.x2)

    def coords(self) -> tuple:
        """The 16 real coordinates ``(x1^0..x1^7, x2^0..x2^7)``."""
        return self.x1.c + self.x2.c

    @classmethod
    def from_coords(cls, c: Sequence, backend: str | None = None) -> "OctVector2":
        return cls(Octonion(c[:8], backend=backend), Octonion(c[8:], backend=backend))

    def is_zero(self) -> bool:
        return not self.x1 and not self.x2


def vec_inner(x: OctVector2, y: OctVector2):
    """``Re(x* y)``."""
    return inner(x.x1, y.x1) + inner(x.x2, y.x2)


@dataclass(frozen=True)
class HermMatrix2:
    """``[[a, q], [conj(q), b]]`` with real ``a, b``."""

    a: object
    b: object
    q: Octonion

    def __post_init__(self):
        fl = self.q.is_float
        for v in (self.a, self.b):
            if isinstance(v, bool) or not isinstance(v, (int, float, Fraction)):
                raise TypeError("diagonal entries must be real scalars")
            if fl and isinstance(v, Fraction):
                raise TypeError("exact diagonal with float off-diagonal")
            if not fl and isinstance(v, float):
                raise TypeError("float diagonal with exact off-diagonal")
        conv = float if fl else Fraction
        object.__setattr__(self, "a", conv(self.a))
        object.__setattr__(self, "b", conv(self.b))

    @property
    def backend(self) -> str:
        return self.q.backend

    @property
    def is_float(self) -> bool:
        return self.q.is_float

    @classmethod
    def diag(cls, a, b, backend: str | None = None) -> "HermMatrix2":
        if backend is None:
            backend = "float" if isinstance(a, float) or isinstance(b, float) else "exact"
        return cls(a, b, Octonion.real(0, backend=backend))

    @classmethod
    def identity(cls, backend: str = "exact") -> "HermMatrix2":
        return cls.diag(1, 1, backend)

    @classmethod
    def zero(cls, backend: str = "exact") -> "HermMatrix2":
        return cls.diag(0, 0, backend)

    def __add__(self, other: "HermMatrix2") -> "HermMatrix2":
        return HermMatrix2(self.a + other.a, self.b + other.b, self.q + other.q)

    def __sub__(self, other: "HermMatrix2") -> "HermMatrix2":
        return HermMatrix2(self.a - other.a, self.b - other.b, self.q - other.q)

    def __neg__(self) -> "HermMatrix2":
        return HermMatrix2(-self.a, -self.b, -self.q)

    def scale(self, s) -> "HermMatrix2":
        return HermMatrix2(self.a * s, self.b * s, self.q * s)

    def to_float(self) -> "HermMatrix2":
        return HermMatrix2(float(self.a), float(self.b), self.q.to_float())

    def as_oct(self) -> "OctMatrix2":
        be = self.backend
        return OctMatrix2(_real_oct(self.a, be), self.q, conj(self.q), _real_oct(self.b, be))

    def vector10(self) -> tuple:
        """Coordinates ``(a, b, q^0..q^7)``."""
        return (self.a, self.b) + self.q.c

    @classmethod
    def from_vector10(cls, v: Sequence, backend: str | None = None) -> "HermMatrix2":
        return cls(v[0], v[1], Octonion(v[2:], backend=backend))

    def is_diagonal(self) -> bool:
        return not self.q


@dataclass(frozen=True)
class OctMatrix2:
    """General 2x2 octonion matrix ``[[m11, m12], [m21, m22]]``."""

    m11: Octonion
    m12: Octonion
    m21: Octonion
    m22: Octonion

    @property
    def backend(self) -> str:
        return self.m11.backend

    def rows(self) -> tuple[tuple[Octonion, Octonion], tuple[Octonion, Octonion]]:
        return ((self.m11, self.m12), (self.m21, self.m22))

    def __add__(self, other: "OctMatrix2") -> "OctMatrix2":
        return OctMatrix2(self.m11 + other.m11, self.m12 + other.m12,
                          self.m21 + other.m21, self.m22 + other.m22)

    def __sub__(self, other: "OctMatrix2") -> "OctMatrix2":
        return self + (-other)

    def __neg__(self) -> "OctMatrix2":
        return OctMatrix2(-self.m11, -self.m12, -self.m21, -self.m22)

    def scale(self, s) -> "OctMatrix2":
        return OctMatrix2(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)

    def star(self) -> "OctMatrix2":
        return OctMatrix2(conj(self.m11), conj(self.m21), conj(self.m12), conj(self.m22))

    def trace(self) -> Octonion:
        return self.m11 + self.m22

    def is_traceless(self) -> bool:
        return not self.trace()

    def apply(self, v: OctVector2) -> OctVector2:
        return OctVector2(mul(self.m11, v.x1) + mul(self.m12, v.x2),
                          mul(self.m21, v.x1) + mul(self.m22, v.x2))

    def to_herm(self) -> HermMatrix2:
        """Read off ``(a, b, q)``; raises if the matrix is not Hermitian (exact backend)."""
        if not self.m11.is_float:
            if not (self.m11.is_real() and self.m22.is_real() and self.m21 == conj(self.m12)):
                raise ValueError("matrix is not Hermitian")
        return HermMatrix2(ore(self.m11), ore(self.m22), self.m12)

    @classmethod
    def identity(cls, backend: str = "exact") -> "OctMatrix2":
        one, zero = _real_oct(1, backend), _real_oct(0, backend)
        return cls(one, zero, zero, one)

    @classmethod
    def diag(cls, d1: Octonion, d2: Octonion) -> "OctMatrix2":
        zero = d1 * 0
        return cls(d1, zero, zero, d2)


def matmul(x: OctMatrix2 | HermMatrix2, y: OctMatrix2 | HermMatrix2) -> OctMatrix2:
    if isinstance(x, HermMatrix2):
        x = x.as_oct()
    if isinstance(y, HermMatrix2):
        y = y.as_oct()
    return OctMatrix2(
        mul(x.m11, y.m11) + mul(x.m12, y.m21),
        mul(x.m11, y.m12) + mul(x.m12, y.m22),
        mul(x.m21, y.m11) + mul(x.m22, y.m21),
        mul(x.m21, y.m12) + mul(x.m22, y.m22),
    )


def re_trace(m: OctMatrix2):
    return ore(m.m11) + ore(m.m22)


def quad(xi: OctVector2, m: OctMatrix2 | HermMatrix2):
    """``Re(xi* M xi)``; the real part does not depend on the bracketing."""
    if isinstance(m, HermMatrix2):
        return (m.a * norm_sq(xi.x1) + m.b * norm_sq(xi.x2)
                + 2 * ore(mul(conj(xi.x1), mul(m.q, xi.x2))))
    mx = m.apply(xi)
    return vec_inner(xi, mx)


# --- scalar invariants ---------------------------------------------------

def det(A: HermMatrix2):
    return A.a * A.b - norm_sq(A.q)


def mixed_det(A: HermMatrix2, B: HermMatrix2):
    """Polarization of ``det``: ``(a_A b_B + b_A a_B - 2 Re(q_A conj(q_B))) / 2``."""
    A.q._check(B.q)
    return (A.a * B.b + A.b * B.a - 2 * inner(A.q, B.q)) / 2


def tr(A: HermMatrix2):
    return A.a + A.b


def adj(A: HermMatrix2) -> HermMatrix2:
    return HermMatrix2(A.b, A.a, -A.q)


def inverse(A: HermMatrix2) -> HermMatrix2:
    d = det(A)
    if d == 0:
        raise SingularMatrix("determinant is zero")
    return adj(A).scale(1 / d if A.is_float else Fraction(1) / d)


def is_positive_definite(A: HermMatrix2) -> bool:
    return A.a > 0 and det(A) > 0


def sylvester_margin(A: HermMatrix2):
    """Smallest pivot ``min(a, det/a)``; positive exactly when ``A > 0``."""
    if A.a <= 0:
        return A.a
    return min(A.a, det(A) / A.a)


def spectrum(A: HermMatrix2) -> tuple:
    """Roots of ``t^2 - tr(A) t + det(A)``, ascending."""
    half = (A.a + A.b) / 2
    disc = ((A.a - A.b) / 2) ** 2 + norm_sq(A.q)
    r = _sqrt(disc, A.is_float)
    return (half - r, half + r)


def rank_one(z: OctVector2) -> HermMatrix2:
    """``z z*``."""
    return HermMatrix2(norm_sq(z.x1), norm_sq(z.x2), mul(z.x1, conj(z.x2)))


def act_generator(A: OctMatrix2, X: HermMatrix2) -> HermMatrix2:
    """The infinitesimal action ``X -> -A* X - X A`` of a traceless matrix."""
    if not A.is_traceless():
        raise NotTraceless("diagonal entries do not sum to zero")
    return (-(matmul(A.star(), X) + matmul(X, A))).to_herm()


def act_scalar(lam, X: HermMatrix2) -> HermMatrix2:
    """A real scalar acts on Hermitian matrices by ``-2 lam``."""
    return X.scale(-2 * lam)


# --- diagonalization -----------------------------------------------------

@dataclass(frozen=True)
class Diagonalization:
    D: HermMatrix2
    g: OctMatrix2
    swapped: bool  # only meaningful for already-diagonal input


def congruence(M: OctMatrix2, X: HermMatrix2) -> HermMatrix2:
    """``M X M*``; this is ``(g^-1)* X g^-1`` for ``g = M^-1``."""
    m = matmul(matmul(M, X), M.star())
    if X.is_float:
        return HermMatrix2(ore(m.m11), ore(m.m22), m.m12)
    return m.to_herm()


def diagonalize(A: HermMatrix2) -> Diagonalization:
    """Unitary ``g`` with entries in ``span{1, s}``, ``s = Im q/|Im q|``, and ``D = g A g*``.

    ``D`` carries the eigenvalues in descending order. For ``q = 0`` nothing
    is moved and ``swapped`` reports whether the diagonal is ascending.
    """
    be = A.backend
    fl = A.is_float
    if not A.q:
        return Diagonalization(A, OctMatrix2.identity(be), A.a < A.b)
    lo, hi = spectrum(A)
    alpha = ore(A.q)
    imq = im(A.q)
    beta_sq = norm_sq(imq)
    if beta_sq:
        beta = _sqrt(beta_sq, fl)
        s = imq / beta
    else:
        beta = _zero(fl)
        s = None

    def field(x, y) -> Octonion:
        # x + y s inside the complex subfield
        out = _real_oct(x, be)
        if y and s is not None:
            out = out + s * y
        return out

    # eigenvector for lam is (q, lam - a) written as (alpha + beta s, lam - a)
    cols = []
    for lam in (hi, lo):
        n2 = alpha * alpha + beta * beta + (lam - A.a) ** 2
        n = _sqrt(n2, fl)
        cols.append((field(alpha / n, beta / n), _real_oct((lam - A.a) / n, be)))
    v11, v21 = cols[0]
    v12, v22 = cols[1]
    V = OctMatrix2(v11, v12, v21, v22)
    g = V.star()
    D = congruence(g, A)
    D = HermMatrix2(D.a, D.b, D.q * 0)  # off-diagonal is zero up to rounding
    return Diagonalization(D, g, False)


@dataclass(frozen=True)
class ReduceRecord:
    moves: tuple[tuple[str, OctMatrix2], ...]

    def apply(self, X: HermMatrix2) -> HermMatrix2:
        for _, M in self.moves:
            X = congruence(M, X)
        return X


def simultaneous_reduce(A: HermMatrix2, B: HermMatrix2) -> tuple:
    """Bring ``A > 0`` to ``c I`` and ``B`` to diagonal form.

    Returns ``(c, D, record)``; ``record.apply`` replays the three moves.
    """
    if not is_positive_definite(A):
        raise NotPositiveDefinite("first argument fails Sylvester's criterion")
    A = A.to_float() if not A.is_float else A
    B = B.to_float() if not B.is_float else B
    d1 = diagonalize(A)
    g1 = d1.g
    lam1, lam2 = d1.D.a, d1.D.b
    r = (lam2 / lam1) ** 0.25
    S = OctMatrix2.diag(_real_oct(r, "float"), _real_oct(1 / r, "float"))
    B2 = congruence(S, congruence(g1, B))
    d3 = diagonalize(B2)
    record = ReduceRecord((("diagonalize", g1), ("scale", S), ("diagonalize", d3.g)))
    c = math.sqrt(lam1 * lam2)
    return c, d3.D, record


# --- text form -----------------------------------------------------------

class HermParseError(ValueError):
    def __init__(self, msg: str, col: int):
        super().__init__(f"column {col}: {msg}")
        self.col = col


_HERM_RE = re.compile(r"^\s*\[\s*\[(?P<a>[^,\]]+),(?P<q>[^\]]+)\]\s*,\s*\[(?P<c>[^,\]]+),(?P<b>[^\]]+)\]\s*\]\s*$")


def parse_herm(text: str) -> HermMatrix2:
    """Parse ``[[a, q],[conj, b]]``; the (2,1) slot must be the literal ``conj``."""
    m = _HERM_RE.match(text)
    if not m:
        raise HermParseError("expected [[a, q],[conj, b]]", 1)
    if m.group("c").strip() != "conj":
        raise HermParseError("the (2,1) entry must be the token 'conj'", m.start("c") + 1)
    try:
        a = Fraction(m.group("a").strip())
        b = Fraction(m.group("b").strip())
    except ValueError:
        raise HermParseError("diagonal entries must be rational", m.start("a") + 1) from None
    try:
        q = parse_octonion(m.group("q"))
    except OctonionParseError as exc:
        raise HermParseError(str(exc), m.start("q") + 1) from None
    return HermMatrix2(a, b, q)


def format_herm(A: HermMatrix2) -> str:
    return f"[[{_fmt(A.a)}, {format_octonion(A.q)}],[conj, {_fmt(A.b)}]]"


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)
