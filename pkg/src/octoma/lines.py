"""Octonionic lines in O^2 and the maps between H2(O) and quadratic forms on R^16.

``j`` sends ``A`` to the form ``xi -> Re(xi* A xi)``. ``theta`` is one
sixteenth of the octonionic Hessian of a quadratic form, in closed form. The
coordinate order ``(x1^0..x1^7, x2^0..x2^7)`` is shared with :mod:`octoma.poly`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from octoma.herm2 import HermMatrix2, OctVector2, rank_one
from octoma.octonion import E, Octonion, conj, inv, left_matrix, mul, norm_sq


class ZeroVector(ValueError):
    pass


class NotUnit(ValueError):
    pass


FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class OctLine:
    """``{(q, slope*q)}``, or the line at infinity ``{(0, q)}`` when ``slope`` is None."""

    slope: Octonion | None

    @property
    def at_infinity(self) -> bool:
        return self.slope is None

    def point(self, q: Octonion) -> OctVector2:
        if self.slope is None:
            return OctVector2(q * 0, q)
        return OctVector2(q, mul(self.slope, q))


def line_spanned(xi: OctVector2) -> OctLine:
    if xi.is_zero():
        raise ZeroVector("the zero vector spans no line")
    if not xi.x1:
        return OctLine(None)
    return OctLine(mul(xi.x2, inv(xi.x1)))


def _is_unit(v: OctVector2) -> bool:
    n = v.norm_sq()
    if v.x1.is_float:
        return abs(n - 1.0) <= 1e-9
    return n == 1


def same_line(xi: OctVector2, eta: OctVector2, tol: float = 1e-9) -> bool:
    """Whether two unit vectors span the same line, via ``xi xi* == eta eta*``."""
    if not _is_unit(xi) or not _is_unit(eta):
        raise NotUnit("same_line expects unit vectors")
    r1, r2 = rank_one(xi), rank_one(eta)
    if xi.x1.is_float:
        diffs = [r1.a - r2.a, r1.b - r2.b, *(r1.q - r2.q).c]
        return max(abs(d) for d in diffs) <= tol
    return r1 == r2


@dataclass(frozen=True)
class QuadForm16:
    """Symmetric 16x16 matrix ``B`` of ``b(x) = x^T B x``."""

    rows: tuple[tuple, ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        if len(rows) != 16 or any(len(r) != 16 for r in rows):
            raise ValueError("a QuadForm16 is a 16x16 matrix")
        for i in range(16):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix is not symmetric")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def zero(cls) -> "QuadForm16":
        return cls(tuple((Fraction(0),) * 16 for _ in range(16)))

    @classmethod
    def identity(cls) -> "QuadForm16":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(16)) for i in range(16)))

    def __getitem__(self, ij: tuple[int, int]):
        return self.rows[ij[0]][ij[1]]

    def __add__(self, other: "QuadForm16") -> "QuadForm16":
        return QuadForm16(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "QuadForm16") -> "QuadForm16":
        return QuadForm16(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def evaluate(self, x: Sequence):
        if isinstance(x, OctVector2):
            x = x.coords()
        return sum(x[i] * self.rows[i][j] * x[j] for i in range(16) for j in range(16) if self.rows[i][j])

    def bilinear(self, x: Sequence, y: Sequence):
        return sum(x[i] * self.rows[i][j] * y[j] for i in range(16) for j in range(16) if self.rows[i][j])

    def block_trace(self, i: int):
        off = 8 * (i - 1)
        return sum(self.rows[off + p][off + p] for p in range(8))


def j_map(A: HermMatrix2) -> QuadForm16:
    """Matrix of ``xi -> Re(xi* A xi)``."""
    zero = 0.0 if A.is_float else Fraction(0)
    B = [[zero] * 16 for _ in range(16)]
    for p in range(8):
        B[p][p] = A.a
        B[8 + p][8 + p] = A.b
    L = left_matrix(A.q)  # Re(conj(xi1) q xi2) = <xi1, q xi2>
    for p in range(8):
        for r in range(8):
            B[p][8 + r] = L[p][r]
            B[8 + r][p] = L[p][r]
    return QuadForm16(tuple(map(tuple, B)))


def theta_map(B: QuadForm16) -> HermMatrix2:
    """``Hess_O(b) / 16`` in closed form."""
    entries = [B[p, 8 + r] for p in range(8) for r in range(8)]
    is_float = any(isinstance(v, float) for v in entries) or isinstance(B[0, 0], float)
    backend = "float" if is_float else "exact"
    q = Octonion.real(0, backend)
    for p in range(8):
        for r in range(8):
            c = B[p, 8 + r]
            if c:
                q = q + mul(E[p] if not is_float else E[p].to_float(),
                            conj(E[r] if not is_float else E[r].to_float())) * c
    eight = 8.0 if is_float else Fraction(8)
    return HermMatrix2(B.block_trace(1) / eight, B.block_trace(2) / eight, q / eight)


def is_in_H16_0(B: QuadForm16) -> bool:
    return j_map(theta_map(B)) == B


def line_basis(xi: OctVector2) -> tuple[list[OctVector2], object]:
    """Spanning vectors ``w_p`` of the line through ``xi`` and their common squared length."""
    line = line_spanned(xi)
    be = xi.backend
    units = [Octonion.unit(p, be) for p in range(8)]
    if line.at_infinity:
        one = 1.0 if be == "float" else Fraction(1)
        return [OctVector2(u * 0, u) for u in units], one
    a = line.slope
    return [OctVector2(u, mul(a, u)) for u in units], 1 + norm_sq(a)


def line_average(B: QuadForm16, xi: OctVector2):
    """Mean of ``b`` over the unit sphere of the line through ``xi``: trace / 8."""
    vecs, n2 = line_basis(xi)
    total = sum(B.evaluate(v.coords()) for v in vecs)
    return total / (8 * n2)


# --- text form -----------------------------------------------------------

def format_quadform(B: QuadForm16) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in B.rows) + "\n"


def parse_quadform(text: str) -> QuadForm16:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 16:
        raise ValueError(f"expected 16 rows, found {len(lines)}")
    rows = []
    for n, ln in enumerate(lines, start=1):
        vals = ln.split()
        if len(vals) != 16:
            raise ValueError(f"row {n}: expected 16 entries, found {len(vals)}")
        rows.append(tuple(Fraction(v) for v in vals))
    return QuadForm16(tuple(rows))
