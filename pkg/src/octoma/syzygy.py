"""Groebner bases of submodules of free modules over Q[x_1..x_n] and syzygy kernels.

Vectors are stored as lists of terms ``(key, comp, mono, coeff)`` sorted by
decreasing ``key`` with integer coefficients (content removed). The order key
of a term is an integer ``W[comp] + F * K(mono)`` where ``K`` packs the graded
reverse lexicographic weight vector ``(deg, -e_{n-1}, ..., -e_0)`` into a
balanced base, so that multiplying by a monomial ``t`` adds ``F * K(t)`` and
preserves the order.

Pair handling follows Gebauer and Moeller; pairs are only formed between
vectors whose leading terms sit in the same component, and the coprime
shortcut is used only for vectors supported in a single component.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from importlib import resources
from math import gcd
from typing import Sequence

from octoma.poly import NVARS, Poly, parse_poly

_BASE_BITS = 12
_BASE = 1 << _BASE_BITS


def _mono_key(m: Sequence[int]) -> int:
    n = len(m)
    k = sum(m)
    for i in range(n - 1, -1, -1):
        k = (k << _BASE_BITS) - m[i]
    return k


@dataclass(frozen=True)
class ModuleOrder:
    """Monomial order on ``A^r``.

    ``kind='pot'``: components first (lower index is larger), then grevlex.
    ``kind='top'``: grevlex first, then components.
    ``eliminate_first``: component 0 dominates everything else; with ``top`` the
    remaining components are compared term-over-position.
    """

    rank: int
    nvars: int = NVARS
    kind: str = "pot"
    eliminate_first: bool = False

    def __post_init__(self):
        if self.kind not in ("pot", "top"):
            raise ValueError("kind must be 'pot' or 'top'")

    @property
    def span(self) -> int:
        # bound on |K(mono)| for exponents below BASE/2 in every slot
        return 1 << (_BASE_BITS * (self.nvars + 1) + 1)

    def weights(self) -> tuple[list[int], int]:
        r, span = self.rank, self.span
        if self.kind == "pot":
            return [(r - c) * 2 * span for c in range(r)], 1
        F = r + 1
        W = [r - c for c in range(r)]
        if self.eliminate_first:
            W[0] = 4 * span * F
        return W, F

    def describe(self) -> str:
        s = f"{self.kind} grevlex, rank {self.rank}"
        return s + (", component 0 eliminated" if self.eliminate_first else "")


class _Ctx:
    def __init__(self, order: ModuleOrder):
        self.order = order
        self.W, self.F = order.weights()
        self.mkey_cache: dict[tuple, int] = {}

    def mkey(self, m: tuple) -> int:
        k = self.mkey_cache.get(m)
        if k is None:
            k = _mono_key(m)
            self.mkey_cache[m] = k
        return k

    def term_key(self, comp: int, m: tuple) -> int:
        return self.W[comp] + self.F * self.mkey(m)


Term = tuple  # (key, comp, mono, coeff)


def _content(terms: list) -> int:
    return reduce(gcd, (t[3] for t in terms), 0)


def _primitive(terms: list) -> list:
    if not terms:
        return terms
    g = _content(terms)
    if terms[0][3] < 0:
        g = -g
    if g == 1:
        return terms
    return [(k, c, m, v // g) for k, c, m, v in terms]


def _combine(ctx: _Ctx, f: list, a: int, g: list, b: int, t: tuple, tk: int) -> list:
    """``a*f - b*(t*g)`` merged in key order."""
    shift = ctx.F * tk
    out = []
    i = j = 0
    nf, ng = len(f), len(g)
    while i < nf or j < ng:
        if j < ng:
            gk, gc, gm, gv = g[j]
            gk += shift
        if i < nf and (j >= ng or f[i][0] > gk):
            fk, fc, fm, fv = f[i]
            out.append((fk, fc, fm, a * fv))
            i += 1
        elif i >= nf or f[i][0] < gk:
            out.append((gk, gc, tuple(x + y for x, y in zip(gm, t)), -b * gv))
            j += 1
        else:
            v = a * f[i][3] - b * gv
            if v:
                out.append((gk, gc, f[i][2], v))
            i += 1
            j += 1
    return out


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _mask(m: tuple) -> int:
    r = 0
    for i, e in enumerate(m):
        if e:
            r |= 1 << i
    return r


class _Elem:
    __slots__ = ("terms", "lcomp", "lm", "mask", "pure", "deg")

    def __init__(self, terms: list, shifts: Sequence[int]):
        self.terms = terms
        _, self.lcomp, self.lm, _ = terms[0]
        self.mask = _mask(self.lm)
        self.pure = all(t[1] == self.lcomp for t in terms)
        self.deg = sum(self.lm) + shifts[self.lcomp]


@dataclass
class GroebnerBasis:
    """A reduced Groebner basis (monic over Q when exported)."""

    order: ModuleOrder
    elems: list = field(repr=False)
    shifts: tuple = ()
    stats: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.order.rank

    def vectors(self) -> list[list[Poly]]:
        return [_to_modvec(e.terms, self.order, monic=True) for e in self.elems]

    def __len__(self) -> int:
        return len(self.elems)


def _from_modvec(v: Sequence[Poly], ctx: _Ctx) -> list:
    terms = []
    dens = 1
    for p in v:
        for c in p.terms.values():
            dens = dens * c.denominator // gcd(dens, c.denominator)
    for comp, p in enumerate(v):
        for m, c in p.terms.items():
            iv = c.numerator * (dens // c.denominator)
            terms.append((ctx.term_key(comp, m), comp, m, iv))
    terms.sort(key=lambda t: -t[0])
    return _primitive(terms)


def _to_modvec(terms: list, order: ModuleOrder, monic: bool = False) -> list[Poly]:
    polys: list[dict] = [dict() for _ in range(order.rank)]
    lead = Fraction(terms[0][3]) if (terms and monic) else Fraction(1)
    for _, comp, m, v in terms:
        polys[comp][m] = Fraction(v) / lead
    return [Poly(d, order.nvars) for d in polys]


def _find_reducer(ctx: _Ctx, comp: int, m: tuple, by_comp: dict) -> _Elem | None:
    mm = _mask(m)
    for g in by_comp.get(comp, ()):
        if g.mask & ~mm == 0 and _divides(g.lm, m):
            return g
    return None


def _reduce(ctx: _Ctx, f: list, by_comp: dict, full: bool, counter: list | None = None) -> list:
    """Normal form of ``f``; top-reduction only unless ``full``."""
    done: list = []
    while f:
        k, comp, m, v = f[0]
        g = _find_reducer(ctx, comp, m, by_comp)
        if g is None:
            if not full:
                return _primitive(f) if not done else _primitive(done + f)
            done.append(f[0])
            f = f[1:]
            continue
        lc = g.terms[0][3]
        d = gcd(v, lc)
        a, b = lc // d, v // d
        t = tuple(x - y for x, y in zip(m, g.lm))
        f = _combine(ctx, f, a, g.terms, b, t, ctx.mkey(t))
        if a != 1 and done:
            done = [(dk, dc, dm, a * dv) for dk, dc, dm, dv in done]
        if counter is not None:
            counter[0] += 1
        if f and len(f) > 8:
            c = _content(f)
            if done:
                c = gcd(c, _content(done))
            if c > 1:
                f = [(fk, fc, fm, fv // c) for fk, fc, fm, fv in f]
                done = [(dk, dc, dm, dv // c) for dk, dc, dm, dv in done]
    return _primitive(done)


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _spoly(ctx: _Ctx, f: _Elem, g: _Elem) -> list:
    L = _lcm(f.lm, g.lm)
    tf = tuple(x - y for x, y in zip(L, f.lm))
    tg = tuple(x - y for x, y in zip(L, g.lm))
    a, b = f.terms[0][3], g.terms[0][3]
    d = gcd(a, b)
    # (b/d) * tf*f - (a/d) * tg*g
    shifted_f = [(k + ctx.F * ctx.mkey(tf), c, tuple(x + y for x, y in zip(m, tf)), v)
                 for k, c, m, v in f.terms]
    return _combine(ctx, shifted_f, b // d, g.terms, a // d, tg, ctx.mkey(tg))


def groebner_module(gens: Sequence[Sequence[Poly]], order: ModuleOrder,
                    shifts: Sequence[int] | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule generated by ``gens``.

    ``shifts`` are component degree shifts used only by the pair selection
    (normal strategy: smallest shifted lcm degree first).
    """
    if not gens:
        raise ValueError("need at least one generator")
    ctx = _Ctx(order)
    shifts = tuple(shifts) if shifts is not None else (0,) * order.rank
    t0 = time.perf_counter()
    counter = [0]
    by_comp: dict[int, list[_Elem]] = {}
    pairs: list[tuple] = []  # (deg, lcm key, serial, i, j, lcm)
    serial = [0]
    stats = {"pairs_considered": 0, "pairs_reduced": 0, "zero_reductions": 0}

    def index_add(e: _Elem):
        by_comp.setdefault(e.lcomp, []).append(e)

    def rebuild_index(elems):
        by_comp.clear()
        for e in elems:
            index_add(e)

    # `active` indexes the current basis inside `all_elems`
    all_elems: list[_Elem] = []
    active: list[int] = []

    def update(h_idx: int):
        nonlocal pairs, active
        h = all_elems[h_idx]
        cand = [gi for gi in active if all_elems[gi].lcomp == h.lcomp]
        C = [(gi, _lcm(h.lm, all_elems[gi].lm)) for gi in cand]

        def coprime(gi: int) -> bool:
            g = all_elems[gi]
            return g.pure and h.pure and all(not (x and y) for x, y in zip(h.lm, g.lm))

        D: list[tuple] = []
        while C:
            gi, L = C.pop(0)
            if coprime(gi) or not any(_divides(L2, L) for _, L2 in C + D):
                D.append((gi, L))
        E = [(gi, L) for gi, L in D if not coprime(gi)]
        kept = []
        for p in pairs:
            _, _, _, i, j, L = p
            if all_elems[i].lcomp == h.lcomp and _divides(h.lm, L):
                if _lcm(all_elems[i].lm, h.lm) != L and _lcm(h.lm, all_elems[j].lm) != L:
                    continue
            kept.append(p)
        for gi, L in E:
            serial[0] += 1
            kept.append((sum(L) + shifts[h.lcomp], ctx.term_key(h.lcomp, L), serial[0], gi, h_idx, L))
        pairs = kept
        active = [gi for gi in active if not (all_elems[gi].lcomp == h.lcomp and _divides(h.lm, all_elems[gi].lm))]
        active.append(h_idx)
        rebuild_index([all_elems[i] for i in active])

    # inter-reduce the input a little: sort by leading term, drop zeros
    start = [_from_modvec(v, ctx) for v in gens]
    start = [s for s in start if s]
    start.sort(key=lambda t: t[0][0])
    for s in start:
        r = _reduce(ctx, s, by_comp, full=False, counter=counter)
        if r:
            all_elems.append(_Elem(r, shifts))
            update(len(all_elems) - 1)
    while pairs:
        pairs.sort(key=lambda p: (p[0], p[1], p[2]))
        p = pairs.pop(0)
        stats["pairs_considered"] += 1
        _, _, _, i, j, _ = p
        s = _spoly(ctx, all_elems[i], all_elems[j])
        r = _reduce(ctx, s, by_comp, full=False, counter=counter) if s else []
        stats["pairs_reduced"] += 1
        if not r:
            stats["zero_reductions"] += 1
            continue
        all_elems.append(_Elem(r, shifts))
        update(len(all_elems) - 1)
    basis = _interreduce(ctx, [all_elems[i] for i in active], shifts, counter)
    stats["reductions"] = counter[0]
    stats["seconds"] = round(time.perf_counter() - t0, 3)
    stats["size"] = len(basis)
    return GroebnerBasis(order, basis, shifts, stats)


def _interreduce(ctx: _Ctx, elems: list[_Elem], shifts, counter) -> list[_Elem]:
    # minimal basis, then tail reduction
    elems = sorted(elems, key=lambda e: e.terms[0][0])
    minimal: list[_Elem] = []
    for e in elems:
        if any(g.lcomp == e.lcomp and _divides(g.lm, e.lm) for g in minimal):
            continue
        minimal = [g for g in minimal if not (g.lcomp == e.lcomp and _divides(e.lm, g.lm))]
        minimal.append(e)
    out: list[_Elem] = []
    for e in minimal:
        others: dict[int, list[_Elem]] = {}
        for g in minimal:
            if g is not e:
                others.setdefault(g.lcomp, []).append(g)
        # the leading term is irreducible by the others, so full reduction only touches the tail
        r = _reduce(ctx, e.terms, others, full=True, counter=counter)
        out.append(_Elem(r, shifts))
    out.sort(key=lambda e: -e.terms[0][0])
    return out


def _index(gb: GroebnerBasis) -> dict:
    by_comp: dict[int, list[_Elem]] = {}
    for e in gb.elems:
        by_comp.setdefault(e.lcomp, []).append(e)
    return by_comp


def normal_form(v: Sequence[Poly], gb: GroebnerBasis) -> list[Poly]:
    """Fully reduced remainder of ``v`` (primitive integer scaling removed, made monic)."""
    if len(v) != gb.rank:
        raise ValueError("vector length does not match the module rank")
    ctx = _Ctx(gb.order)
    r = _reduce(ctx, _from_modvec(v, ctx), _index(gb), full=True)
    return _to_modvec(r, gb.order, monic=True) if r else [Poly.zero(gb.order.nvars)] * gb.rank


def is_member(v: Sequence[Poly], gb: GroebnerBasis) -> bool:
    if len(v) != gb.rank:
        raise ValueError("vector length does not match the module rank")
    ctx = _Ctx(gb.order)
    return not _reduce(ctx, _from_modvec(v, ctx), _index(gb), full=False)


def s_pairs_reduce_to_zero(gb: GroebnerBasis) -> bool:
    """Buchberger's criterion checked over every pair with matching leading component."""
    ctx = _Ctx(gb.order)
    idx = _index(gb)
    es = gb.elems
    for a in range(len(es)):
        for b in range(a + 1, len(es)):
            if es[a].lcomp != es[b].lcomp:
                continue
            s = _spoly(ctx, es[a], es[b])
            if s and _reduce(ctx, s, idx, full=False):
                return False
    return True


# --- syzygies ------------------------------------------------------------

@dataclass
class SyzygyBasis:
    generators: list[list[Poly]]
    groebner: GroebnerBasis
    kernel_groebner_size: int
    provenance: dict


def _vec_is_zero(v: Sequence[Poly]) -> bool:
    return all(p.is_zero() for p in v)


def pairing(Q: Sequence[Poly], P: Sequence[Poly]) -> Poly:
    nv = P[0].nvars
    return sum((q * p for q, p in zip(Q, P)), Poly.zero(nv))


def _vec_degree(v: Sequence[Poly], shifts: Sequence[int]) -> int:
    return max((p.degree() + s for p, s in zip(v, shifts) if not p.is_zero()), default=-1)


def syzygy_kernel(row: Sequence[Poly], kind: str = "pot", minimize: bool = True) -> SyzygyBasis:
    """Generators of ``{Q : sum Q_j P_j = 0}`` via the graph module ``(P_j, e_j)``.

    The Groebner basis of the graph module is computed for an order in which
    component 0 dominates; its elements with zero first entry, projected to
    the remaining entries, generate the kernel. With ``minimize`` the list is
    trimmed to a minimal generating set (degree by degree, membership tests).
    """
    J = len(row)
    if J < 1:
        raise ValueError("need at least one polynomial")
    nv = row[0].nvars
    zero = Poly.zero(nv)
    one = Poly.const(1, nv)
    gens = []
    for j, p in enumerate(row):
        v = [p] + [zero] * J
        v[1 + j] = one
        gens.append(v)
    order = ModuleOrder(J + 1, nv, kind=kind, eliminate_first=True)
    shifts = [0] + [max(p.degree(), 0) for p in row]
    gb = groebner_module(gens, order, shifts)
    kernel = [v[1:] for v in gb.vectors() if v[0].is_zero()]
    kshifts = shifts[1:]
    kernel.sort(key=lambda v: _vec_degree(v, kshifts))
    gens_out = kernel
    if minimize and kernel:
        gens_out = minimal_generators(kernel, nv, kshifts)
    prov = {
        "order": order.describe(),
        "groebner_size": len(gb),
        "kernel_groebner_elements": len(kernel),
        **gb.stats,
    }
    return SyzygyBasis(gens_out, gb, len(kernel), prov)


def minimal_generators(vectors: Sequence[Sequence[Poly]], nvars: int = NVARS,
                       shifts: Sequence[int] | None = None, kind: str = "top") -> list[list[Poly]]:
    """Drop vectors that already lie in the span of earlier (lower degree) ones."""
    rank = len(vectors[0])
    shifts = list(shifts) if shifts is not None else [0] * rank
    order = ModuleOrder(rank, nvars, kind=kind)
    vecs = sorted(vectors, key=lambda v: _vec_degree(v, shifts))
    if all(_is_graded(v, shifts) for v in vecs):
        return _minimal_graded(vecs, order, shifts)
    accepted: list[list[Poly]] = []
    gb: GroebnerBasis | None = None
    for v in vecs:
        if _vec_is_zero(v):
            continue
        if gb is None or not is_member(v, gb):
            accepted.append(list(v))
            gb = groebner_module(accepted, order, shifts)
    return accepted


def _is_graded(v: Sequence[Poly], shifts: Sequence[int]) -> bool:
    degs = {sum(m) + s for p, s in zip(v, shifts) for m in p.terms}
    return len(degs) <= 1


def _minimal_graded(vecs: list, order: ModuleOrder, shifts: Sequence[int]) -> list[list[Poly]]:
    # In degree d, v is redundant iff its normal form modulo the lower-degree
    # generators lies in the Q-span of the normal forms of the degree-d vectors
    # already accepted.
    ctx = _Ctx(order)
    accepted: list[list[Poly]] = []
    gb = None
    k = 0
    while k < len(vecs):
        d = _vec_degree(vecs[k], shifts)
        batch = []
        while k < len(vecs) and _vec_degree(vecs[k], shifts) == d:
            batch.append(vecs[k])
            k += 1
        idx = _index(gb) if gb is not None else {}
        echelon: dict[tuple, dict] = {}  # pivot term -> row with that pivot
        added = False
        for v in batch:
            r = _reduce(ctx, _from_modvec(v, ctx), idx, full=True)
            row = {(c, m): Fraction(val) for _, c, m, val in r}
            row = _eliminate(row, echelon, ctx)
            if row:
                piv = max(row, key=lambda cm: ctx.term_key(*cm))
                echelon[piv] = row
                accepted.append(list(v))
                added = True
        if added and k < len(vecs):
            gb = groebner_module(accepted, order, shifts)
    return accepted


def _eliminate(row: dict, echelon: dict, ctx: _Ctx) -> dict:
    while row:
        piv = max(row, key=lambda cm: ctx.term_key(*cm))
        base = echelon.get(piv)
        if base is None:
            return row
        f = row[piv] / base[piv]
        for key, val in base.items():
            nv = row.get(key, 0) - f * val
            if nv:
                row[key] = nv
            else:
                row.pop(key, None)
    return row


def modules_equal(gens_a: Sequence[Sequence[Poly]], gens_b: Sequence[Sequence[Poly]],
                  kind: str = "top") -> bool:
    """Mutual membership of generating sets."""
    return module_containment(gens_a, gens_b, kind)[0] and module_containment(gens_b, gens_a, kind)[0]


def module_containment(inner_gens: Sequence[Sequence[Poly]], outer_gens: Sequence[Sequence[Poly]],
                       kind: str = "top") -> tuple[bool, list[int]]:
    """Whether every vector of ``inner_gens`` lies in the span of ``outer_gens``; failures listed."""
    if not outer_gens:
        bad = [i for i, v in enumerate(inner_gens) if not _vec_is_zero(v)]
        return not bad, bad
    rank = len(outer_gens[0])
    if any(len(v) != rank for v in inner_gens):
        raise ValueError("modules live in free modules of different rank")
    nv = outer_gens[0][0].nvars
    gb = groebner_module(outer_gens, ModuleOrder(rank, nv, kind=kind))
    bad = [i for i, v in enumerate(inner_gens) if not is_member(v, gb)]
    return not bad, bad


def same_up_to_sign_and_order(gens_a: Sequence[Sequence[Poly]], gens_b: Sequence[Sequence[Poly]]) -> bool:
    if len(gens_a) != len(gens_b):
        return False
    pool = [tuple(v) for v in gens_b]
    for v in gens_a:
        v = tuple(v)
        neg = tuple(-p for p in v)
        for k, w in enumerate(pool):
            if w == v or w == neg:
                pool.pop(k)
                break
        else:
            return False
    return True


# --- fixtures ------------------------------------------------------------

XY_NAMES = tuple([f"x{k}" for k in range(8)] + [f"y{k}" for k in range(8)])


def _data(name: str) -> str:
    return resources.files("octoma").joinpath("data", name).read_text()


def _lines(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def transcribed_quadrics() -> list[Poly]:
    """The ten quadrics exactly as listed in the kernel computation input."""
    return [parse_poly(ln, var_names=XY_NAMES) for ln in _lines(_data("quadrics.txt"))]


def _entry(tok: str) -> Poly:
    return Poly.zero() if tok == "0" else parse_poly(tok, var_names=XY_NAMES)


def reference_generators() -> list[list[Poly]]:
    """The 16 columns of the printed 10x16 kernel generator matrix."""
    return [list(c) for c in _reference_columns()]


@lru_cache(maxsize=1)
def _reference_columns() -> tuple[tuple[Poly, ...], ...]:
    rows = [[_entry(t) for t in ln.split()] for ln in _lines(_data("generator_rows.txt"))]
    if len(rows) != 10 or any(len(r) != 16 for r in rows):
        raise ValueError("generator fixture must be 10 rows of 16 entries")
    return tuple(tuple(rows[r][c] for r in range(10)) for c in range(16))


def scalar_system_matrices() -> tuple[list[list[Poly]], list[list[Poly]]]:
    """The two displayed 8x8 operator matrices of the scalar closed-current system."""
    blocks = _data("scalar_system.txt").split("---")
    out = []
    for blk in blocks:
        rows = [[_entry(t) for t in ln.split()] for ln in _lines(blk)]
        out.append(rows)
    return out[0], out[1]


def ten_quadrics(basis: str = "doubling") -> list[Poly]:
    """``|x|^2, |y|^2`` and the eight components of ``x conj(y)``.

    ``basis='doubling'`` expresses everything in the Cayley-Dickson basis
    ``(1, i, j, k, l, il, jl, kl)`` (``i=e1, j=e2, k=e4, l=e3``), the basis in which
    the kernel matrix is printed; ``basis='table'`` uses the table basis e0..e7.
    """
    from octoma.octonion import E, conj, doubling_basis, mul

    if basis == "table":
        frame = [E[k] for k in range(8)]
    elif basis == "doubling":
        frame = list(doubling_basis())
    else:
        raise ValueError("basis must be 'doubling' or 'table'")
    x = [Poly.var(k) for k in range(8)]
    y = [Poly.var(8 + k) for k in range(8)]
    P1 = sum((v * v for v in x), Poly.zero())
    P2 = sum((v * v for v in y), Poly.zero())
    # coefficient of frame[k] in (sum x_a f_a) conj(sum y_b f_b); the frame is orthonormal
    comps = [Poly.zero() for _ in range(8)]
    for a in range(8):
        for b in range(8):
            prod = mul(frame[a], conj(frame[b]))
            for k in range(8):
                c = sum(u * v for u, v in zip(prod.c, frame[k].c))
                if c:
                    comps[k] = comps[k] + (x[a] * y[b]).scale(c)
    return [P1, P2] + comps


def format_modvecs(vectors: Sequence[Sequence[Poly]]) -> str:
    from octoma.poly import format_poly

    return "".join(", ".join(format_poly(p) for p in v) + "\n" for v in vectors)


def parse_modvecs(text: str) -> list[list[Poly]]:
    """One vector per line, entries separated by commas; ``#`` lines are comments."""
    out = []
    for ln_no, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip() or ln.lstrip().startswith("#"):
            continue
        entries = []
        col = 0
        for piece in ln.split(","):
            entries.append(parse_poly(piece, line=ln_no, col_offset=col))
            col += len(piece) + 1
        out.append(entries)
    return out
