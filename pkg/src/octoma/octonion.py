"""Octonion arithmetic over exact rationals or float64.

The basis products come from a single signed table (``MUL_INDEX``/``MUL_SIGN``),
row = left factor, column = right factor. Two scalar backends exist:

* exact: every component is a :class:`fractions.Fraction`
* float: every component is a Python ``float``

An octonion carries its backend, and combining the two raises ``TypeError``.

For the Cayley-Dickson form the quaternion subalgebra is ``i=e1, j=e2, k=e4``
and the doubling unit is ``l = e3`` (``CD_UNIT``); see :func:`find_cd_unit`.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

# e1..e7 rows, columns e1..e7; "-1" is -e0
_TABLE_ROWS = (
    "-1  e4  e7 -e2  e6 -e5 -e3",
    "-e4 -1  e5  e1 -e3  e7 -e6",
    "-e7 -e5 -1  e6  e2 -e4  e1",
    "e2 -e1 -e6  -1  e7  e3 -e5",
    "-e6 e3 -e2 -e7  -1  e1  e4",
    "e5 -e7  e4 -e3 -e1  -1  e2",
    "e3  e6 -e1  e5 -e4 -e2  -1",
)


def _build_table() -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    idx = [[0] * 8 for _ in range(8)]
    sgn = [[1] * 8 for _ in range(8)]
    for k in range(8):
        idx[0][k] = idx[k][0] = k
    for i, row in enumerate(_TABLE_ROWS, start=1):
        for j, tok in enumerate(row.split(), start=1):
            s = -1 if tok.startswith("-") else 1
            tok = tok.lstrip("-")
            idx[i][j] = 0 if tok == "1" else int(tok[1:])
            sgn[i][j] = s
    return tuple(map(tuple, idx)), tuple(map(tuple, sgn))


MUL_INDEX, MUL_SIGN = _build_table()
# flat (i, j, k, sign) list for the inner product loop
_TERMS = tuple((i, j, MUL_INDEX[i][j], MUL_SIGN[i][j]) for i in range(8) for j in range(8))

FANO_LINES = ((1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 7), (5, 6, 1), (6, 7, 2), (7, 1, 3))


class Octonion:
    """Immutable octonion ``sum c[k] e_k``."""

    __slots__ = ("c", "is_float")

    def __init__(self, comps: Iterable, *, backend: str | None = None):
        c = tuple(comps)
        if len(c) != 8:
            raise ValueError("an octonion has 8 components")
        has_float = any(isinstance(v, float) for v in c)
        has_frac = any(isinstance(v, Fraction) for v in c)
        if backend is None:
            if has_float and has_frac:
                raise TypeError("mixed exact/float components")
            backend = "float" if has_float else "exact"
        if backend == "float":
            if has_frac:
                raise TypeError("exact component in float octonion")
            c = tuple(float(v) for v in c)
        elif backend == "exact":
            if has_float:
                raise TypeError("float component in exact octonion")
            c = tuple(v if type(v) is Fraction else Fraction(v) for v in c)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "is_float", backend == "float")

    def __setattr__(self, name, value):
        raise AttributeError("Octonion is immutable")

    @classmethod
    def real(cls, x, backend: str | None = None) -> "Octonion":
        return cls((x, 0, 0, 0, 0, 0, 0, 0), backend=backend)

    @classmethod
    def unit(cls, k: int, backend: str = "exact") -> "Octonion":
        c = [0] * 8
        c[k] = 1
        return cls(c, backend=backend)

    @property
    def backend(self) -> str:
        return "float" if self.is_float else "exact"

    def to_float(self) -> "Octonion":
        return Octonion((float(v) for v in self.c), backend="float")

    def _check(self, other: "Octonion") -> None:
        if self.is_float != other.is_float:
            raise TypeError("cannot combine exact and float octonions")

    def _scalar(self, s):
        if isinstance(s, bool):
            raise TypeError("bool is not a scalar")
        if self.is_float:
            if isinstance(s, Fraction):
                raise TypeError("exact scalar with float octonion")
            if isinstance(s, (int, float)):
                return float(s)
        else:
            if isinstance(s, float):
                raise TypeError("float scalar with exact octonion")
            if isinstance(s, Rational):
                return Fraction(s)
        raise TypeError(f"unsupported scalar {type(s).__name__}")

    def __add__(self, other):
        if not isinstance(other, Octonion):
            s = self._scalar(other)
            return Octonion((self.c[0] + s,) + self.c[1:], backend=self.backend)
        self._check(other)
        return Octonion((a + b for a, b in zip(self.c, other.c)), backend=self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Octonion((-a for a in self.c), backend=self.backend)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return mul(self, other)
        s = self._scalar(other)
        return Octonion((a * s for a in self.c), backend=self.backend)

    def __rmul__(self, other):
        s = self._scalar(other)
        return Octonion((s * a for a in self.c), backend=self.backend)

    def __truediv__(self, other):
        if isinstance(other, Octonion):
            return mul(self, inv(other))
        s = self._scalar(other)
        if s == 0:
            raise ZeroDivisionError("division of octonion by zero")
        return Octonion((a / s for a in self.c), backend=self.backend)

    def __eq__(self, other):
        if isinstance(other, Octonion):
            return self.is_float == other.is_float and self.c == other.c
        if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.is_float, self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"Octonion({format_octonion(self)!r}, backend={self.backend!r})"

    def __str__(self):
        return format_octonion(self)

    def conj(self) -> "Octonion":
        return conj(self)

    def re(self):
        return self.c[0]

    def norm_sq(self):
        return norm_sq(self)

    def is_real(self) -> bool:
        return not any(self.c[1:])


def mul(a: Octonion, b: Octonion) -> Octonion:
    """Bilinear extension of the basis table."""
    a._check(b)
    ac, bc = a.c, b.c
    out = [0.0 if a.is_float else Fraction(0)] * 8
    for i, j, k, s in _TERMS:
        x = ac[i]
        if not x:
            continue
        y = bc[j]
        if not y:
            continue
        if s > 0:
            out[k] += x * y
        else:
            out[k] -= x * y
    return Octonion(out, backend=a.backend)


def conj(q: Octonion) -> Octonion:
    c = q.c
    return Octonion((c[0],) + tuple(-v for v in c[1:]), backend=q.backend)


def re(q: Octonion):
    return q.c[0]


def im(q: Octonion) -> Octonion:
    zero = 0.0 if q.is_float else Fraction(0)
    return Octonion((zero,) + q.c[1:], backend=q.backend)


def norm_sq(q: Octonion):
    return sum(v * v for v in q.c)


def inner(x: Octonion, y: Octonion):
    """``Re(x conj(y))``, the Euclidean pairing of the components."""
    x._check(y)
    return sum(a * b for a, b in zip(x.c, y.c))


def inv(q: Octonion) -> Octonion:
    n = norm_sq(q)
    if n == 0:
        raise ZeroDivisionError("octonion 0 has no inverse")
    return conj(q) / n


def associator(a: Octonion, b: Octonion, c: Octonion) -> Octonion:
    """``(ab)c - a(bc)``."""
    return mul(mul(a, b), c) - mul(a, mul(b, c))


def commutator(a: Octonion, b: Octonion) -> Octonion:
    return mul(a, b) - mul(b, a)


def left_matrix(a: Octonion) -> list[list]:
    """8x8 real matrix ``L`` with ``L @ x == a*x`` in components."""
    zero = 0.0 if a.is_float else Fraction(0)
    m = [[zero] * 8 for _ in range(8)]
    for i, j, k, s in _TERMS:
        if a.c[i]:
            m[k][j] += s * a.c[i]
    return m


def right_matrix(a: Octonion) -> list[list]:
    """8x8 real matrix ``R`` with ``R @ x == x*a`` in components."""
    zero = 0.0 if a.is_float else Fraction(0)
    m = [[zero] * 8 for _ in range(8)]
    for i, j, k, s in _TERMS:
        if a.c[j]:
            m[k][i] += s * a.c[j]
    return m


ZERO = Octonion((0,) * 8)
ONE = Octonion.unit(0)
E = tuple(Octonion.unit(k) for k in range(8))


# --- Cayley-Dickson ------------------------------------------------------

QUAT_EMBED = (0, 1, 2, 4)  # 1, i, j, k -> e0, e1, e2, e4
CD_UNIT = 3


def quat_mul(p: Sequence, q: Sequence) -> tuple:
    """Hamilton product on 4-tuples ``(r, i, j, k)``."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quat_conj(p: Sequence) -> tuple:
    return (p[0], -p[1], -p[2], -p[3])


def embed_pair(x: Sequence, y: Sequence, l_unit: int = CD_UNIT, backend: str = "exact") -> Octonion:
    """The octonion ``x + y*l`` for quaternions ``x, y``."""
    hx = [0] * 8
    hy = [0] * 8
    for slot, k in enumerate(QUAT_EMBED):
        hx[k] = x[slot]
        hy[k] = y[slot]
    ox = Octonion(hx, backend=backend)
    oy = Octonion(hy, backend=backend)
    return ox + mul(oy, Octonion.unit(l_unit, backend))


def cayley_dickson_mul(x: Sequence, y: Sequence, w: Sequence, z: Sequence,
                       l_unit: int = CD_UNIT, backend: str = "exact") -> Octonion:
    """``(x + y l)(w + z l) = (xw - conj(z) y) + (z x + y conj(w)) l``."""
    first = tuple(a - b for a, b in zip(quat_mul(x, w), quat_mul(quat_conj(z), y)))
    second = tuple(a + b for a, b in zip(quat_mul(z, x), quat_mul(y, quat_conj(w))))
    return embed_pair(first, second, l_unit, backend)


def _cd_agrees(l_unit: int) -> bool:
    basis = [tuple(int(s == t) for t in range(4)) for s in range(4)]
    zero = (0, 0, 0, 0)
    halves = [(b, zero) for b in basis] + [(zero, b) for b in basis]
    for x, y in halves:
        for w, z in halves:
            lhs = cayley_dickson_mul(x, y, w, z, l_unit)
            rhs = mul(embed_pair(x, y, l_unit), embed_pair(w, z, l_unit))
            if lhs != rhs:
                return False
    return True


def find_cd_unit() -> int:
    """First of e3, e5, e6, e7 for which the doubling formula matches the table."""
    for k in (3, 5, 6, 7):
        if _cd_agrees(k):
            return k
    raise RuntimeError("no basis unit reproduces the table")


# --- text form -----------------------------------------------------------

_TERM_RE = _re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*(e[0-7]))?|(e[0-7]))\s*"
)


class OctonionParseError(ValueError):
    def __init__(self, msg: str, col: int):
        super().__init__(f"{msg} at column {col}")
        self.col = col


def parse_octonion(text: str) -> Octonion:
    """Parse ``a0 + a1*e1 + ... + a7*e7`` with rational coefficients."""
    comps = [Fraction(0)] * 8
    pos = 0
    first = True
    s = text.strip()
    if not s:
        raise OctonionParseError("empty octonion", 1)
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(4) is None):
            raise OctonionParseError("unexpected input", pos + 1)
        sign, num, unit_a, unit_b = m.groups()
        if sign is None and not first:
            raise OctonionParseError("expected '+' or '-'", pos + 1)
        coeff = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            coeff = -coeff
        unit = unit_a or unit_b
        k = int(unit[1]) if unit else 0
        comps[k] += coeff
        pos = m.end()
        first = False
    return Octonion(comps)


def _fmt_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(v)


def format_octonion(q: Octonion) -> str:
    parts: list[str] = []
    for k, v in enumerate(q.c):
        if not v:
            continue
        neg = v < 0
        mag = _fmt_scalar(-v if neg else v)
        if k == 0:
            body = mag
        else:
            body = f"e{k}" if mag == "1" else f"{mag}*e{k}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts) if parts else "0"


def doubling_basis(l_unit: int = CD_UNIT) -> tuple[Octonion, ...]:
    """``(1, i, j, k, l, il, jl, kl)`` written in the table basis."""
    units = [Octonion.unit(k) for k in QUAT_EMBED]
    l = Octonion.unit(l_unit)
    return tuple(units) + (l,) + tuple(mul(u, l) for u in units[1:])


def doubling_frame(l_unit: int = CD_UNIT) -> tuple[tuple[int, int], ...]:
    """Signed permutation ``(index, sign)`` per doubling-basis vector.

    Doubling coordinate ``k`` multiplies ``sign * e_index`` of the table basis.
    """
    out = []
    for q in doubling_basis(l_unit):
        (k,) = [n for n in range(8) if q.c[n]]
        out.append((k, int(q.c[k])))
    return tuple(out)
