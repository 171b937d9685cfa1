from fractions import Fraction

from hypothesis import given, strategies as st

from conftest import traceless
from octoma import polycalc as pc, randgen as R
from octoma.herm2 import HermMatrix2, OctMatrix2, OctVector2
from octoma.octonion import E, ONE, ZERO, Octonion
from octoma.poly import Poly, format_poly, parse_poly, x1, x2

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
Z = Poly.zero()


def norm1():
    return sum((x1(p) * x1(p) for p in range(8)), Z)


def norm2():
    return sum((x2(p) * x2(p) for p in range(8)), Z)


def rand_poly(seed, deg=5, terms=40):
    return R.poly16(R.stream(seed, "test_polycalc"), deg, terms)


def test_barred_derivative_examples():
    assert pc.d_bar_left(1, x1(0)) == pc.OctPoly.const(ONE)
    assert pc.d_bar_left(1, x1(1)) == pc.OctPoly.const(E[1])
    F = pc.OctPoly(tuple(x1(1) if k == 2 else Z for k in range(8)))
    assert pc.d_right(1, F) == pc.OctPoly.const(E[4])


def test_hess_examples():
    assert pc.hess_oct(norm1()) == pc.HermPolyMatrix(Poly.const(16), Z, pc.OctPoly.zero())
    H = pc.hess_oct(x1(0) * x2(0))
    assert H.d1.is_zero() and H.d2.is_zero() and H.q == pc.OctPoly.const(ONE)
    assert pc.hess_oct(Poly.const(7)).is_zero()


def test_laplacian_examples():
    assert pc.laplacian(1, norm1()) == Poly.const(16)
    f = rand_poly(3, 4, 10)
    assert pc.laplacian_line(OctVector2(ONE, ZERO), f) == pc.laplacian(1, f)
    zeta = OctVector2(ONE * Fraction(3, 5), E[1] * Fraction(4, 5))
    # eight orthonormal directions, each contributing d^2|x|^2 = 2
    assert pc.laplacian_line(zeta, norm1() + norm2()) == Poly.const(16)


def test_closed_current_examples():
    zero = pc.OctPoly.zero()
    T = pc.HermPolyMatrix.const(HermMatrix2(Fraction(2), Fraction(-1), E[3]))
    assert all(r.is_zero() for r in pc.closed_current_residual(T))
    T = pc.HermPolyMatrix(Z, x1(0), zero)
    r1, _ = pc.closed_current_residual(T)
    assert r1.c[0] == Poly.const(-1)
    assert not all(p.is_zero() for p in pc.closed_current_residual_scalar(T))
    T0 = pc.HermPolyMatrix(Z, Z, zero)
    assert all(p.is_zero() for p in pc.closed_current_residual_scalar(T0))


def test_ma_polynomials():
    u = norm1() + norm2()
    assert pc.ma_det(u) == Poly.const(256)
    assert pc.ma_det(norm1()) == Z
    v = rand_poly(5, 3, 12)
    assert pc.ma_mixed(v, v) == pc.ma_det(v)


def test_divergence_examples():
    assert all(p.is_zero() for p in pc.divergence_defect(norm1() + x1(2) * x2(5)))
    a = pc.divergence_coefficients(rand_poly(11, 4, 15))
    a = [list(r) for r in a]
    a[0][0] = a[0][0] + x1(0)
    assert not all(p.is_zero() for p in pc.divergence_defect_of(a))


def test_psi_examples():
    const = pc.OctPoly.const(Octonion([1, 0, 2, 0, 0, 3, 0, 0]))
    single = pc.OctPoly(tuple(x1(0) * x1(1) if k == 2 else Z for k in range(8)))
    for psi in (const, single):
        for k in (1, 2):
            assert all(d.is_zero() for d in pc.psi_laplacian_identity(psi, k))


def test_equivariance_examples():
    A = OctMatrix2(ZERO, E[1], E[5], ZERO)
    assert not any(pc.hessian_equivariance_defect(norm1() + norm2(), A))
    zero = OctMatrix2(ZERO, ZERO, ZERO, ZERO)
    assert not any(pc.hessian_equivariance_defect(rand_poly(2, 2, 20), zero))


def test_poly_grammar():
    p = parse_poly("3/2*x1_0^2 - x2_7 + 4")
    assert p == (x1(0) * x1(0)).scale(Fraction(3, 2)) - x2(7) + Poly.const(4)
    assert parse_poly(format_poly(p)) == p


@given(seeds)
def test_hessian_is_closed(seed):
    T = pc.hess_oct(rand_poly(seed))
    assert all(r.is_zero() for r in pc.closed_current_residual(T))
    assert all(p.is_zero() for p in pc.closed_current_residual_scalar(T))


@given(seeds)
def test_scalar_and_octonionic_residuals_vanish_together(seed):
    rng = R.stream(seed, "test_polycalc.currents")
    q = pc.OctPoly(tuple(R.poly16(rng, 2, 4) for _ in range(8)))
    T = pc.HermPolyMatrix(R.poly16(rng, 2, 4), R.poly16(rng, 2, 4), q)
    if rng.random() < 0.5:
        T = pc.hess_oct(R.poly16(rng, 3, 10)) if rng.random() < 0.5 else T
    oct_zero = all(r.is_zero() for r in pc.closed_current_residual(T))
    scal_zero = all(p.is_zero() for p in pc.closed_current_residual_scalar(T))
    assert oct_zero == scal_zero


@given(seeds)
def test_divergence_form(seed):
    assert all(p.is_zero() for p in pc.divergence_defect(rand_poly(seed, 4, 20)))


@given(seeds)
def test_theta_is_hessian_over_16(seed):
    from octoma.lines import QuadForm16, theta_map

    B = R.quadratic_form(R.stream(seed, "test_polycalc.quad"), 10)
    Hq = pc.hess_oct(pc.quadratic_poly(B)).constant_value()
    assert list(Hq.vector10()) == [16 * v for v in theta_map(QuadForm16(tuple(map(tuple, B)))).vector10()]


@given(seeds, traceless())
def test_hessian_equivariance(seed, A):
    B = R.quadratic_form(R.stream(seed, "test_polycalc.eq"), 10)
    assert not any(pc.hessian_equivariance_defect(pc.quadratic_poly(B), A))


def _apply_rows(M, diag, comps, first_var):
    for i in range(8):
        rhs = sum((pc.apply_linear_operator([M[i][k]], [comps[k]]) for k in range(8)), Z)
        yield diag.diff(first_var + i) == rhs


@given(seeds)
def test_displayed_scalar_system_holds_for_hessians(seed):
    from octoma.syzygy import scalar_system_matrices

    M1, M2 = scalar_system_matrices()
    d1, d2, comps = pc.to_doubling_coordinates(pc.hess_oct(rand_poly(seed, 4, 20)))
    assert all(_apply_rows(M1, d2, comps, 0)) and all(_apply_rows(M2, d1, comps, 8))


def test_displayed_scalar_system_rejects_non_closed_current():
    from octoma.syzygy import scalar_system_matrices

    M1, _ = scalar_system_matrices()
    d1, d2, comps = pc.to_doubling_coordinates(pc.HermPolyMatrix(Z, x1(0), pc.OctPoly.zero()))
    assert not all(_apply_rows(M1, d2, comps, 0))
