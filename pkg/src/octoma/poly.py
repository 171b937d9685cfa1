"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` maps exponent tuples to nonzero ``Fraction`` coefficients.
The number of variables is part of the value; ``NVARS = 16`` with the
coordinates ordered ``x1_0..x1_7, x2_0..x2_7`` is the default used throughout
the package. Terms print in graded reverse lexicographic order (largest first).
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

NVARS = 16
VAR_NAMES = tuple(f"x{i}_{a}" for i in (1, 2) for a in range(8))
_VAR_INDEX = {name: n for n, name in enumerate(VAR_NAMES)}


def var_index(i: int, a: int) -> int:
    """Position of ``x_i^a`` (``i`` in 1..2, ``a`` in 0..7)."""
    return (i - 1) * 8 + a


def grevlex_key(m: Sequence[int]) -> tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


class Poly:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Mapping[tuple, object] | None = None, nvars: int = NVARS):
        clean: dict[tuple, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError("exponent length does not match variable count")
                if c:
                    clean[tuple(m)] = c if type(c) is Fraction else Fraction(c)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "nvars", nvars)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Poly":
        # terms already clean
        p = object.__new__(cls)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "nvars", nvars)
        return p

    @classmethod
    def const(cls, c, nvars: int = NVARS) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, n: int, nvars: int = NVARS) -> "Poly":
        m = [0] * nvars
        m[n] = 1
        return cls({tuple(m): 1}, nvars)

    @classmethod
    def zero(cls, nvars: int = NVARS) -> "Poly":
        return cls._raw({}, nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly.const(other, self.nvars)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, s) -> "Poly":
        s = Fraction(s)
        if not s:
            return Poly.zero(self.nvars)
        return Poly._raw({m: c * s for m, c in self.terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.const(1, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == Poly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def diff(self, n: int) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            e = m[n]
            if e:
                mm = list(m)
                mm[n] = e - 1
                out[tuple(mm)] = c * e
        return Poly._raw(out, self.nvars)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __call__(self, point: Sequence):
        return evaluate(self, point)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def evaluate(p: Poly, point: Sequence):
    """Evaluate at a point; exact for rational points, float for float points."""
    total = 0
    for m, c in p.terms.items():
        t = c if not isinstance(point[0], float) else float(c)
        for x, e in zip(point, m):
            if e:
                t = t * x**e
        total = total + t
    return total


def from_monomials(items: Iterable[tuple[Sequence[int], object]], nvars: int = NVARS) -> Poly:
    out: dict[tuple, Fraction] = {}
    for m, c in items:
        m = tuple(m)
        out[m] = out.get(m, 0) + Fraction(c)
    return Poly(out, nvars)


X = tuple(Poly.var(n) for n in range(NVARS))


def x1(a: int) -> Poly:
    return X[a]


def x2(a: int) -> Poly:
    return X[8 + a]


# --- text grammar --------------------------------------------------------

class PolyParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^])")


def _tokenize(text: str, line: int, col_offset: int) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PolyParseError(f"unexpected character {text[pos]!r}", line, pos + 1 + col_offset)
        toks.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return toks


def parse_poly(text: str, line: int = 1, col_offset: int = 0, var_names: Sequence[str] = VAR_NAMES) -> Poly:
    """Parse ``term (('+'|'-') term)*`` with ``term := rational ('*' var '^' nat)*``.

    A term may also start directly with a variable (coefficient 1) and an
    exponent ``^1`` may be omitted; the printer always emits the full form.
    """
    index = {n: k for k, n in enumerate(var_names)}
    nvars = len(var_names)
    toks = _tokenize(text, line, col_offset)
    if not toks:
        raise PolyParseError("empty polynomial", line, col_offset + 1)
    end_col = len(text.rstrip()) + 1

    def err(msg: str, k: int):
        c = toks[k][2] + 1 if k < len(toks) else end_col
        raise PolyParseError(msg, line, c + col_offset)

    def peek(k: int) -> tuple[str, str]:
        return toks[k][:2] if k < len(toks) else ("end", "")

    terms: dict[tuple, Fraction] = {}
    i = 0
    sign = 1
    if peek(0) in (("op", "-"), ("op", "+")):
        sign = -1 if toks[0][1] == "-" else 1
        i = 1
    while True:
        expo = [0] * nvars
        kind, val = peek(i)
        if kind == "num":
            coeff = Fraction(val)
            i += 1
        elif kind == "var":
            coeff = Fraction(1)
        else:
            err("expected a number or variable", i)
        first_factor = kind == "var"
        while True:
            if not first_factor:
                if peek(i) != ("op", "*"):
                    break
                i += 1
            first_factor = False
            kind, val = peek(i)
            if kind != "var":
                err("expected a variable", i)
            if val not in index:
                err(f"unknown variable {val}", i)
            i += 1
            power = 1
            if peek(i) == ("op", "^"):
                i += 1
                kind, val2 = peek(i)
                if kind != "num" or "/" in val2:
                    err("expected a natural exponent", i)
                power = int(val2)
                i += 1
            expo[index[val]] += power
        m = tuple(expo)
        terms[m] = terms.get(m, 0) + sign * coeff
        kind, val = peek(i)
        if kind == "end":
            break
        if kind != "op" or val not in "+-":
            err("expected '+' or '-'", i)
        sign = 1 if val == "+" else -1
        i += 1
    return Poly(terms, nvars)


def format_poly(p: Poly, var_names: Sequence[str] = VAR_NAMES) -> str:
    if p.is_zero():
        return "0"
    out: list[str] = []
    for m, c in p.sorted_terms():
        neg = c < 0
        body = str(-c if neg else c)
        for k, e in enumerate(m):
            if e:
                body += f"*{var_names[k]}^{e}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)
