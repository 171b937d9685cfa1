"""Seeded property suites run by ``octoma verify``.

Each property draws its instances from the stream named ``"<suite>.<property>"``
so adding or reordering properties never shifts another property's draws.
Expensive properties run ``count // weight`` instances (at least one).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from octoma import herm2 as H
from octoma import lie, lines, polycalc as pc, randgen as R
from octoma.estimates import (delta_L_sides, elementary_inequality_sides, fourth_order_sides,
                              trace_bound_sides, trace_square)
from octoma.octonion import (ONE, E, FANO_LINES, Octonion, associator, cayley_dickson_mul, conj,
                             embed_pair, mul, norm_sq, re)


@dataclass(frozen=True)
class Prop:
    name: str
    check: Callable[[np.random.Generator, str], bool]
    weight: int = 1


def _eq(a, b, backend: str, tol: float = 1e-9) -> bool:
    if backend == "exact":
        return a == b
    if isinstance(a, Octonion):
        return max(abs(x - y) for x, y in zip(a.c, b.c)) <= tol * (1 + max(abs(v) for v in a.c))
    return abs(a - b) <= tol * (1 + abs(a))


def _oct(rng, backend):
    return R.octonion(rng, 20) if backend == "exact" else R.float_octonion(rng)


# --- octonions ------------------------------------------------------------

def _norm_mult(rng, be):
    a, b = _oct(rng, be), _oct(rng, be)
    return _eq(norm_sq(mul(a, b)), norm_sq(a) * norm_sq(b), be)


def _anti_involution(rng, be):
    a, b = _oct(rng, be), _oct(rng, be)
    return (_eq(conj(conj(a)), a, be) and _eq(conj(a + b), conj(a) + conj(b), be)
            and _eq(conj(mul(a, b)), mul(conj(b), conj(a)), be))


def _lemma_identities(rng, be):
    a, b, c = _oct(rng, be), _oct(rng, be), _oct(rng, be)
    s = mul(a, b) + mul(conj(b), conj(a))
    return (_eq(re(mul(mul(a, b), c)), re(mul(a, mul(b, c))), be)
            and _eq(mul(a, mul(b, c)) + mul(conj(b), mul(conj(a), c)), mul(s, c), be)
            and _eq(mul(mul(c, a), b) + mul(mul(c, conj(b)), conj(a)), mul(c, s), be)
            and _eq(re(mul(mul(conj(a), b), mul(c, a))), norm_sq(a) * re(mul(b, c)), be)
            and _artin(rng, a, b, be))


def _artin(rng, a, b, be):
    """(iv): the subalgebra generated by ``a`` and ``b`` is associative (sampled elements)."""
    words = [a * 0 + 1, a, b, mul(a, b), mul(b, a), mul(a, a), mul(b, mul(a, b)), mul(mul(a, b), mul(b, a))]

    def elem():
        return sum((w * int(rng.integers(-3, 4)) for w in words), a * 0)

    x, y, z = elem(), elem(), elem()
    t = associator(x, y, z)
    if be == "exact":
        return not any(t.c)
    return max(abs(v) for v in t.c) <= 1e-12 * (1 + math.sqrt(norm_sq(x) * norm_sq(y) * norm_sq(z)))


def _moufang(rng, be):
    x, y, z = _oct(rng, be), _oct(rng, be), _oct(rng, be)
    m1 = mul(mul(z, x), mul(y, z))
    return _eq(m1, mul(z, mul(mul(x, y), z)), be) and _eq(m1, mul(mul(z, mul(x, y)), z), be)


def _polarized_moufang(rng, be):
    x, y, z1, z2 = (_oct(rng, be) for _ in range(4))
    p1 = mul(mul(z1, x), mul(y, z2)) + mul(mul(z2, x), mul(y, z1))
    p2 = mul(z1, mul(mul(x, y), z2)) + mul(z2, mul(mul(x, y), z1))
    p3 = mul(mul(z1, mul(x, y)), z2) + mul(mul(z2, mul(x, y)), z1)
    return _eq(p1, p2, be) and _eq(p1, p3, be)


def _associator_alternating(rng, be):
    a, b, c = _oct(rng, be), _oct(rng, be), _oct(rng, be)
    t = associator(a, b, c)
    zero = a * 0
    return (_eq(associator(a, a, b), zero, be) and _eq(associator(b, c, c), zero, be)
            and _eq(associator(b, a, c), -t, be) and _eq(associator(a, c, b), -t, be)
            and _eq(associator(ONE if be == "exact" else ONE.to_float(), b, c), zero, be))


def _fano(rng, be):
    return all(mul(E[i], E[j]) == E[k] and mul(E[j], E[i]) == -E[k] for i, j, k in FANO_LINES)


def _cayley_dickson(rng, be):
    x, y, w, z = ([R.rational(rng, 20) for _ in range(4)] for _ in range(4))
    return cayley_dickson_mul(x, y, w, z) == mul(embed_pair(x, y), embed_pair(w, z))


# --- Hermitian matrices ---------------------------------------------------

def _herm(rng, be):
    return R.herm(rng) if be == "exact" else R.float_herm(rng)


def _pd(rng, be):
    return R.pd_herm(rng) if be == "exact" else R.float_pd_herm(rng)


def _mixed_polar(rng, be):
    A, B = _herm(rng, be), _herm(rng, be)
    half_tr = H.re_trace(H.matmul(H.adj(A), B)) / 2
    return _eq(H.mixed_det(A, A), H.det(A), be) and _eq(H.mixed_det(A, B), half_tr, be)


def _mixed_positive(rng, be):
    return H.mixed_det(_pd(rng, be), _pd(rng, be)) > 0


def _adj_rules(rng, be):
    A, B = _herm(rng, be), _herm(rng, be)
    add = H.adj(A + B)
    s = H.adj(A) + H.adj(B)
    prod = H.matmul(H.adj(A), A)
    d = H.det(A)
    zero = A.a * 0
    return (_eq(add.a, s.a, be) and _eq(add.b, s.b, be) and _eq(add.q, s.q, be)
            and _eq(prod.m11.c[0], d, be) and _eq(prod.m22.c[0], d, be)
            and all(_eq(v, zero, be) for v in prod.m12.c + prod.m21.c + prod.m11.c[1:] + prod.m22.c[1:]))


def _sylvester_sampled(rng, be):
    A = R.float_herm(rng)
    pd = H.is_positive_definite(A)
    vals = [H.quad(_float_vector(rng), A) for _ in range(200)]
    # a non-PD matrix may still look positive on samples, so only the forward direction is certain
    return (not pd) or min(vals) > 0


def _float_vector(rng):
    return H.OctVector2(R.float_octonion(rng), R.float_octonion(rng))


def _spectrum_invariance(rng, be):
    A = R.float_herm(rng)
    d = H.diagonalize(A)
    s0, s1 = H.spectrum(A), H.spectrum(d.D)
    return all(abs(x - y) <= 1e-10 * (1 + abs(x)) for x, y in zip(s0, s1))


def _trace_bound(rng, be):
    lhs, rhs = trace_bound_sides(R.float_pd_herm(rng), R.float_pd_herm(rng))
    return lhs <= rhs + 1e-9 * (1 + abs(rhs))


def _trace_square(rng, be):
    return trace_square(R.float_pd_herm(rng), R.float_herm(rng)) >= -1e-9


def _aleksandrov(rng, be):
    A, B = R.float_pd_herm(rng), R.float_herm(rng)
    m = H.mixed_det(A, B)
    return m * m >= H.det(A) * H.det(B) - 1e-9 * (1 + abs(m * m))


# --- lines and quadratic forms --------------------------------------------

def _theta_j(rng, be):
    A = R.herm(rng)
    return lines.theta_map(lines.j_map(A)) == A


def _averaging(rng, be):
    B = lines.QuadForm16(tuple(map(tuple, R.quadratic_form(rng, 10))))
    xi = R.nonzero_vector(rng, 10)
    proj = lines.j_map(lines.theta_map(B))
    return proj.evaluate(xi) == lines.line_average(B, xi) * xi.norm_sq() and lines.is_in_H16_0(proj)


def _line_invariance(rng, be):
    a = R.octonion(rng, 10)
    u = R.octonion(rng, 10)
    q = R.octonion(rng, 10)
    if not u or not q:
        return True
    xi = lines.OctLine(a).point(q)
    eta = lines.OctLine(a).point(mul(q, u))
    return lines.line_spanned(xi) == lines.line_spanned(eta)


# --- Lie action -----------------------------------------------------------

def _equiv_need(rng, be):
    lhs, rhs = lie.equiv_need_sides(R.traceless(rng, 10), R.vector(rng, 10))
    return lhs == rhs


def _jjj(rng, be):
    lhs, rhs = lie.jjj_sides(R.herm(rng, 10), R.traceless(rng, 10), R.vector(rng, 10))
    return lhs == rhs


def _dual(rng, be):
    a, b = lie.dual_check(R.traceless(rng, 10), R.vector(rng, 10), R.vector(rng, 10))
    return a == b


def _hat_transpose(rng, be):
    A = R.traceless(rng, 10)
    return lie.transpose(lie.hat(A)) == lie.hat(lie.hat_dual(A))


def _word(rng, length: int = 3):
    return [(lie.random_generator(rng, 0.5), float(rng.uniform(-1, 1))) for _ in range(length)]


def _unit_float(v: H.OctVector2) -> H.OctVector2:
    n = math.sqrt(v.norm_sq())
    return v.scale(1 / n)


def _conformal(rng, be):
    g = lie.exp_word(_word(rng))
    a = R.float_octonion(rng)
    q1, q2 = R.float_octonion(rng), R.float_octonion(rng)
    line = lines.OctLine(a)
    xi, eta = _unit_float(line.point(q1)), _unit_float(line.point(q2))
    gx, gy = g.apply(xi), g.apply(eta)
    ok = abs(math.sqrt(gx.norm_sq()) - math.sqrt(gy.norm_sq())) <= 1e-7 * math.sqrt(gx.norm_sq())
    return ok and lines.same_line(_unit_float(gx), _unit_float(gy), tol=1e-7)


def _cone(rng, be):
    g = lie.exp_word(_word(rng))
    return H.is_positive_definite(g.act(R.float_pd_herm(rng)))


def _compat(rng, be):
    g = lie.exp_word(_word(rng))
    X = R.float_herm(rng)
    a, b = g.act(X).vector10(), lie.action_via_forms(g, X).vector10()
    return max(abs(x - y) for x, y in zip(a, b)) <= 1e-7 * (1 + max(abs(x) for x in a))


def _det_one(rng, be):
    return abs(np.linalg.det(lie.exp_word(_word(rng)).rep16) - 1.0) <= 1e-8


# --- polynomial calculus --------------------------------------------------

def _closed(rng, be):
    u = R.poly16(rng)
    T = pc.hess_oct(u)
    return (all(r.is_zero() for r in pc.closed_current_residual(T))
            and all(p.is_zero() for p in pc.closed_current_residual_scalar(T)))


def _divergence(rng, be):
    return all(p.is_zero() for p in pc.divergence_defect(R.poly16(rng, 4)))


def _psi(rng, be):
    psi = pc.OctPoly(tuple(R.poly16(rng, 4, 8) for _ in range(8)))
    k = int(rng.integers(1, 3))
    return all(d.is_zero() for d in pc.psi_laplacian_identity(psi, k))


def _theta_compat(rng, be):
    B = R.quadratic_form(rng, 10)
    Hq = pc.hess_oct(pc.quadratic_poly(B)).constant_value()
    th = lines.theta_map(lines.QuadForm16(tuple(map(tuple, B))))
    return list(Hq.vector10()) == [16 * v for v in th.vector10()]


def _equivariance(rng, be):
    B = R.quadratic_form(rng, 10)
    return not any(pc.hessian_equivariance_defect(pc.quadratic_poly(B), R.traceless(rng, 5)))


def _oriented_point(rng, n: int = 16):
    return [Fraction(int(rng.integers(-3, 4)), 10) for _ in range(n)]


def _osh_poly(rng, scale: Fraction):
    from octoma.poly import Poly

    u = Poly.zero()
    for n in range(16):
        u = u + (Poly.var(n) * Poly.var(n)).scale(Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5))))
    extra = R.poly16(rng, 4, 10, 9)
    extra = Poly({m: c for m, c in extra.terms.items() if sum(m) >= 3})
    return u + extra.scale(scale)


def _elementary(rng, be):
    lhs, rhs = elementary_inequality_sides(_osh_poly(rng, Fraction(1)), [0] * 16)
    return lhs <= rhs


def _delta_L(rng, be):
    u = _osh_poly(rng, Fraction(1, 20))
    pt = _oriented_point(rng)
    slope = R.octonion(rng, 4) if rng.random() < 0.9 else None
    try:
        lhs, rhs = delta_L_sides(u, pt, slope)
    except H.NotPositiveDefinite:
        return True
    return lhs >= rhs


def _fourth_order(rng, be):
    u = _osh_poly(rng, Fraction(1, 20))
    try:
        lhs, rhs = fourth_order_sides(u, _oriented_point(rng))
    except H.NotPositiveDefinite:
        return True
    return lhs == rhs


# --- syzygies -------------------------------------------------------------

def _reference_columns(rng, be):
    from octoma import syzygy as S

    P = S.transcribed_quadrics()
    return P == S.ten_quadrics() and all(S.pairing(c, P).is_zero() for c in S.reference_generators())


def _kernel(rng, be):
    from octoma import syzygy as S

    P = S.transcribed_quadrics()
    return S.modules_equal(S.syzygy_kernel(P).generators, S.reference_generators())


# --- Monge-Ampere ---------------------------------------------------------

def _rand_trig(rng, coords, K, n=4, scale=1.0):
    from octoma.ma_solver import TrigPoly

    d = {}
    for _ in range(n):
        k = [0] * 16
        for c in coords:
            k[c] = int(rng.integers(-K, K + 1))
        c, sn = float(rng.normal(0, scale)), float(rng.normal(0, scale))
        d[tuple(k)] = (c, sn if any(k) else 0.0)
    return TrigPoly(d)


def _ibp(rng, be):
    from octoma.ma_solver import TorusHermField, TrigPoly, ibp_defect

    g0 = TorusHermField(H.HermMatrix2.identity(backend="float"), TrigPoly.cos_along(0.01, x1_0=1))
    coords = (0, 8, 3)
    return ibp_defect(_rand_trig(rng, coords, 2), _rand_trig(rng, coords, 2), g0)[2] < 1e-10


def _normalization(rng, be):
    from octoma.ma_solver import TorusHermField, TrigPoly, normalization_constant

    g0 = TorusHermField.identity()
    c = float(rng.normal())
    return (normalization_constant(TrigPoly(), g0) == 1.0
            and abs(normalization_constant(TrigPoly.constant(c), g0) - math.exp(-c)) <= 1e-12 * math.exp(-c))


def _galerkin(rng, be):
    from octoma.ma_solver import SolverConfig, TorusHermField, galerkin_matrix

    cfg = SolverConfig(active=(0, 8), max_freq=2)
    phi = _rand_trig(rng, (0, 8), 2, 3, 0.0005)
    J = galerkin_matrix(phi, TorusHermField.identity(), cfg)
    sym = np.max(np.abs(J - J.T)) <= 1e-9 * np.max(np.abs(J))
    return bool(sym and np.linalg.matrix_rank(J) == J.shape[0])


def _manufactured(rng, be):
    from octoma.ma_solver import SolverConfig, TorusHermField, manufacture, newton_solve, sup_difference

    cfg = SolverConfig(active=(0, 8), max_freq=2)
    star = _rand_trig(rng, (0, 8), 2, 3, 0.0005)
    g0 = TorusHermField.identity()
    rep = newton_solve(manufacture(star, g0, cfg).f_nodes, g0, cfg)
    star = star - star.__class__.constant(star.mean)
    return sup_difference(rep.solution, star) < 1e-8


SUITES: dict[str, list[Prop]] = {
    "octonion_core": [
        Prop("norm_multiplicativity", _norm_mult),
        Prop("anti_involution", _anti_involution),
        Prop("lemma_identities", _lemma_identities),
        Prop("moufang", _moufang),
        Prop("polarized_moufang", _polarized_moufang),
        Prop("associator_alternating", _associator_alternating),
        Prop("fano_lines", _fano, 10 ** 9),
        Prop("cayley_dickson", _cayley_dickson, 10),
    ],
    "herm2": [
        Prop("mixed_det_polarization", _mixed_polar),
        Prop("mixed_det_positive", _mixed_positive),
        Prop("adjugate_rules", _adj_rules),
        Prop("sylvester_sampled", _sylvester_sampled, 20),
        Prop("spectrum_invariance", _spectrum_invariance),
        Prop("trace_bound", _trace_bound),
        Prop("trace_square_nonnegative", _trace_square),
        Prop("aleksandrov", _aleksandrov),
    ],
    "lines_maps": [
        Prop("theta_after_j", _theta_j),
        Prop("averaging_identity", _averaging, 5),
        Prop("line_right_invariance", _line_invariance),
    ],
    "lie_action": [
        Prop("equiv_need", _equiv_need),
        Prop("jjj", _jjj),
        Prop("duality", _dual),
        Prop("hat_transpose", _hat_transpose, 5),
        Prop("det_one", _det_one, 5),
        Prop("conformality", _conformal, 5),
        Prop("cone_preservation", _cone, 5),
        Prop("rep10_vs_forms", _compat, 5),
    ],
    "polycalc": [
        Prop("closed_current", _closed, 5),
        Prop("divergence_form", _divergence, 5),
        Prop("psi_laplacian", _psi, 10),
        Prop("theta_compatibility", _theta_compat, 5),
        Prop("hessian_equivariance", _equivariance, 10),
        Prop("elementary_inequality", _elementary, 5),
        Prop("delta_L_inequality", _delta_L, 10),
        Prop("fourth_order_identity", _fourth_order, 10),
    ],
    "syzygy": [
        Prop("reference_columns", _reference_columns, 10 ** 9),
        Prop("kernel_equals_reference", _kernel, 10 ** 9),
    ],
    "ma_solver": [
        Prop("ibp", _ibp, 10),
        Prop("normalization", _normalization),
        Prop("galerkin_symmetric_nonsingular", _galerkin, 20),
        Prop("manufactured_recovery", _manufactured, 50),
    ],
}


def run_suites(seed: int, count: int, backend: str = "exact", only: list[str] | None = None) -> dict:
    """Pass/fail counts per property; the result depends only on the arguments."""
    out: dict = {}
    for suite, props in SUITES.items():
        if only and suite not in only:
            continue
        res = {}
        for p in props:
            rng = R.stream(seed, f"{suite}.{p.name}")
            n = max(1, count // p.weight)
            passed = failed = 0
            first_failure = None
            for i in range(n):
                try:
                    ok = p.check(rng, backend)
                except Exception as exc:  # a crash counts as a failure and is reported
                    ok = False
                    first_failure = first_failure or f"instance {i}: {type(exc).__name__}: {exc}"
                if ok:
                    passed += 1
                else:
                    failed += 1
                    first_failure = first_failure or f"instance {i}"
            res[p.name] = {"instances": n, "passed": passed, "failed": failed}
            if first_failure:
                res[p.name]["first_failure"] = first_failure
        out[suite] = res
    return out
