"""The eleven acceptance criteria, one test each.

Each test records a single PASS/FAIL line that pytest prints in its summary
section ``acceptance criteria``; running this file directly prints the same lines.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from octoma import herm2 as H
from octoma import lie, lines, polycalc as pc, randgen as R
from octoma import syzygy as S
from octoma.estimates import (delta_L_sides, elementary_inequality_sides, trace_bound_sides, trace_square)
from octoma.herm2 import HermMatrix2, OctVector2
from octoma.ma_solver import (SolverConfig, TorusHermField, TrigPoly, ibp_defect, manufacture, newton_solve,
                              normalization_constant, sup_difference)
from octoma.poly import Poly
from octoma.suites import run_suites

SEED = R.DEFAULT_SEED


def rng_for(n: int):
    return R.stream(SEED, f"acceptance.{n}")


@pytest.fixture
def record():
    def _record(n: int, title: str, ok: bool, detail: str):
        ACCEPTANCE_LINES[n] = f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}"
        print(ACCEPTANCE_LINES[n])
        assert ok, detail

    return _record


def test_01_kernel_of_the_ten_quadrics(record):
    P = S.transcribed_quadrics()
    columns_ok = all(S.pairing(col, P).is_zero() for col in S.reference_generators())
    t0 = time.perf_counter()
    basis = S.syzygy_kernel(S.ten_quadrics(), kind="pot")
    equal = S.modules_equal(basis.generators, S.reference_generators())
    elapsed = time.perf_counter() - t0
    ok = columns_ok and equal and elapsed < 600 and P == S.ten_quadrics()
    record(1, "kernel module equals the printed 10x16 matrix", ok,
           f"{len(basis.generators)} generators, modules_equal={equal}, all 16 columns syzygies={columns_ok}, "
           f"{elapsed:.1f}s")


def test_02_hessians_are_closed_currents(record):
    rng = rng_for(2)
    bad = 0
    for _ in range(500):
        T = pc.hess_oct(R.poly16(rng, 5, 40))
        oct_zero = all(r.is_zero() for r in pc.closed_current_residual(T))
        scal_zero = all(p.is_zero() for p in pc.closed_current_residual_scalar(T))
        bad += not (oct_zero and scal_zero)
    record(2, "Hess_O(u) is closed (octonionic and 16 scalar residuals)", bad == 0,
           f"500 random degree<=5 potentials, {bad} failures")


def test_03_algebra_suite(record):
    res = run_suites(SEED, 10 ** 4, only=["octonion_core"])["octonion_core"]
    names = ["norm_multiplicativity", "anti_involution", "moufang", "polarized_moufang", "lemma_identities",
             "associator_alternating"]
    counts = {n: (res[n]["passed"], res[n]["instances"]) for n in names}
    ok = all(p == i == 10 ** 4 for p, i in counts.values())
    record(3, "octonion algebra identities", ok,
           ", ".join(f"{n} {p}/{i}" for n, (p, i) in counts.items()))


def test_04_theta_j_and_averaging(record):
    rng = rng_for(4)
    tj = sum(lines.theta_map(lines.j_map(A)) == A for A in (R.herm(rng) for _ in range(1000)))
    avg = 0
    for _ in range(1000):
        B = lines.QuadForm16(tuple(map(tuple, R.quadratic_form(rng, 10))))
        xi = R.nonzero_vector(rng, 10)
        avg += lines.j_map(lines.theta_map(B)).evaluate(xi) == lines.line_average(B, xi) * xi.norm_sq()
    record(4, "theta o j = Id and the line-averaging identity", tj == avg == 1000,
           f"theta(j(A)) = A {tj}/1000, averaging {avg}/1000")


def test_05_equivariance(record):
    rng = rng_for(5)
    need = sum(a == b for a, b in (lie.equiv_need_sides(R.traceless(rng, 10), R.vector(rng, 10))
                                   for _ in range(1000)))
    jjj = sum(a == b for a, b in (lie.jjj_sides(R.herm(rng, 10), R.traceless(rng, 10), R.vector(rng, 10))
                                  for _ in range(1000)))
    conf = cone = 0
    for _ in range(100):
        g = lie.exp_word([(lie.random_generator(rng, 0.5), float(rng.uniform(-1, 1))) for _ in range(4)])
        line = lines.OctLine(R.float_octonion(rng))
        p, q = (_unit(line.point(R.float_octonion(rng))) for _ in range(2))
        gp, gq = g.apply(p), g.apply(q)
        conf += (math.isclose(gp.norm_sq(), gq.norm_sq(), rel_tol=1e-7)
                 and lines.same_line(_unit(gp), _unit(gq), tol=1e-7))
        cone += H.is_positive_definite(g.act(R.float_pd_herm(rng)))
    ok = need == jjj == 1000 and conf == cone == 100
    record(5, "equivariance of the Hessian calculus", ok,
           f"generator identities {need}/1000 and {jjj}/1000; group words conformal {conf}/100, "
           f"cone-preserving {cone}/100")


def _unit(v: OctVector2) -> OctVector2:
    return v.scale(1 / math.sqrt(v.norm_sq()))


def test_06_mixed_determinant(record):
    rng = rng_for(6)
    diag = polar = pos = 0
    for _ in range(1000):
        A, B = R.herm(rng), R.herm(rng)
        diag += H.mixed_det(A, A) == H.det(A)
        polar += H.mixed_det(A, B) == H.re_trace(H.matmul(H.adj(A), B)) / 2
        pos += H.mixed_det(R.pd_herm(rng), R.pd_herm(rng)) > 0
    record(6, "mixed determinant identities", diag == polar == pos == 1000,
           f"D(A,A)=det A {diag}/1000, D(A,B)=Re Tr(adj(A)B)/2 {polar}/1000, positivity {pos}/1000")


def test_07_divergence_form(record):
    rng = rng_for(7)
    good = sum(all(p.is_zero() for p in pc.divergence_defect(R.poly16(rng, 4, 40))) for _ in range(200))
    record(7, "divergence form of the linearized operator", good == 200, f"{good}/200 zero defects")


def _rand_trig(rng, coords, K, n, scale):
    d = {}
    for _ in range(n):
        k = [0] * 16
        for c in coords:
            k[c] = int(rng.integers(-K, K + 1))
        d[tuple(k)] = (float(rng.normal(0, scale)), float(rng.normal(0, scale)) if any(k) else 0.0)
    return TrigPoly(d)


def test_08_integration_by_parts(record):
    rng = rng_for(8)
    worst = 0.0
    for _ in range(100):
        coords = tuple(int(c) for c in rng.choice(16, size=3, replace=False))
        g0 = TorusHermField(HermMatrix2.identity("float"), _rand_trig(rng, coords, 1, 2, 0.001))
        worst = max(worst, ibp_defect(_rand_trig(rng, coords, 2, 4, 1.0), _rand_trig(rng, coords, 2, 4, 1.0), g0)[2])
    record(8, "integration by parts symmetry on the torus", worst < 1e-10,
           f"100 random triples, worst relative defect {worst:.2e}")


def test_09_manufactured_solutions(record):
    g0 = TorusHermField.identity()
    t0 = time.perf_counter()
    details = []
    ok = True
    cases = [(TrigPoly.cos_along(0.01, x1_0=1), SolverConfig(active=(0,), max_freq=3)),
             (TrigPoly.cos_along(0.005, x1_0=1, x2_0=1), SolverConfig(active=(0, 8), max_freq=3))]
    for star, cfg in cases:
        f = manufacture(star, g0, cfg).f_nodes
        rep = newton_solve(f, g0, cfg)
        err = sup_difference(rep.solution, star)
        guess = _rand_trig(rng_for(9), cfg.active, 2, 4, 0.0005)
        other = newton_solve(f, g0, cfg, initial=guess).solution
        agree = sup_difference(rep.solution, other)
        ok &= err < 1e-8 and rep.iterations <= 10 and agree < 1e-8
        details.append(f"err {err:.1e} in {rep.iterations} it, guesses agree {agree:.1e}")
    zero = newton_solve(TrigPoly(), g0, SolverConfig(active=(0, 8), max_freq=3)).solution
    z = sup_difference(zero, TrigPoly())
    elapsed = time.perf_counter() - t0
    ok &= z < 1e-12 and elapsed < 60
    record(9, "Monge-Ampere manufactured solutions", ok,
           f"single mode: {details[0]}; mixed mode: {details[1]}; f=0 gives sup|phi| {z:.1e}; {elapsed:.2f}s")


def test_10_normalization_constant(record):
    g0 = TorusHermField.identity()
    one = normalization_constant(TrigPoly(), g0)
    rng = rng_for(10)
    worst = max(abs(normalization_constant(TrigPoly.constant(c), g0) / math.exp(-c) - 1)
                for c in (float(v) for v in rng.normal(0, 2, 50)))
    record(10, "normalization constant", one == 1.0 and worst < 1e-12,
           f"A(0) = {one!r}, worst relative error of A(c) = e^-c over 50 constants {worst:.1e}")


def _convex_poly(rng, scale):
    u = Poly.zero()
    for n in range(16):
        u = u + (Poly.var(n) * Poly.var(n)).scale(Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 5))))
    extra = R.poly16(rng, 4, 10, 9)
    return u + Poly({m: c for m, c in extra.terms.items() if sum(m) >= 3}).scale(scale)


def test_11_inequality_spot_suite(record):
    rng = rng_for(11)
    tol = 1e-9  # float cases only; the elementary and Delta_L sides are exact rationals
    elem = sum(lhs <= rhs for lhs, rhs in
               (elementary_inequality_sides(_convex_poly(rng, Fraction(1)), [0] * 16) for _ in range(200)))
    tb = sum(lhs <= rhs + tol * (1 + abs(rhs)) for lhs, rhs in
             (trace_bound_sides(R.float_pd_herm(rng), R.float_pd_herm(rng)) for _ in range(1000)))
    ts = sum(trace_square(R.float_pd_herm(rng), R.float_herm(rng)) >= -tol for _ in range(1000))
    dl = tried = 0
    while tried < 200:
        u = _convex_poly(rng, Fraction(1, 20))
        pt = [Fraction(int(rng.integers(-3, 4)), 10) for _ in range(16)]
        slope = R.octonion(rng, 4) if rng.random() < 0.9 else None
        try:
            lhs, rhs = delta_L_sides(u, pt, slope)
        except H.NotPositiveDefinite:
            continue
        tried += 1
        dl += lhs >= rhs
    ok = elem == dl == 200 and tb == ts == 1000
    record(11, "inequality spot-suite", ok,
           f"elementary {elem}/200, trace bound {tb}/1000, tr((A^-1 B)^2) >= 0 {ts}/1000, Delta_L {dl}/200")


if __name__ == "__main__":
    def _print_record(n, title, ok, detail):
        print(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")

    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn(_print_record)
            except Exception as exc:  # report and continue with the next criterion
                print(f"[FAIL] {name}: {type(exc).__name__}: {exc}")
