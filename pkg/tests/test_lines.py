from fractions import Fraction

import pytest
from hypothesis import assume, given

from conftest import herms, octonions, vectors
from octoma.herm2 import HermMatrix2, OctVector2
from octoma.lines import (NotUnit, OctLine, QuadForm16, ZeroVector, format_quadform, is_in_H16_0, j_map,
                          line_average, line_spanned, parse_quadform, same_line, theta_map)
from octoma.octonion import E, ONE, ZERO, Octonion, conj, inner, mul, norm_sq

e1, e2 = E[1], E[2]
half = Fraction(1, 2)


def V(a, b):
    return OctVector2(a, b)


def test_line_spanned_examples():
    assert line_spanned(V(ONE, e1)) == OctLine(e1)
    assert line_spanned(V(ZERO, ONE)).at_infinity
    assert line_spanned(V(e1, e2)) == OctLine(E[4])
    with pytest.raises(ZeroVector):
        line_spanned(V(ZERO, ZERO))


def test_same_line_examples():
    assert not same_line(V(ONE, ZERO), V(ZERO, ONE))
    with pytest.raises(NotUnit):
        same_line(V(ONE, ONE), V(ONE, ZERO))
    # right multiplication by a unit keeps the line when the first entry is real
    u = (E[3] * 3 + E[5] * 4) / 5
    xi = V(ONE * Fraction(3, 5), e2 * Fraction(4, 5))
    assert same_line(xi, V(mul(xi.x1, u), mul(xi.x2, u)))


def test_right_unit_multiplication_can_change_the_line():
    xi = V(e1 * Fraction(3, 5), e2 * Fraction(4, 5))
    u = E[3]
    eta = V(mul(xi.x1, u), mul(xi.x2, u))
    assert not same_line(xi, eta)


def test_j_examples():
    assert j_map(HermMatrix2.identity()) == QuadForm16.identity()
    xi = V(Octonion([1, 2, 0, 0, 1, 0, 0, 3]), Octonion([0, 1, -1, 2, 0, 0, 4, 1]))
    assert j_map(HermMatrix2(Fraction(2), Fraction(3), ZERO)).evaluate(xi) == 2 * norm_sq(xi.x1) + 3 * norm_sq(xi.x2)
    B = j_map(HermMatrix2(Fraction(0), Fraction(0), e1))
    assert B.evaluate(xi) == 2 * mul(mul(conj(xi.x1), e1), xi.x2).c[0]


def _form(entries):
    rows = [[Fraction(0)] * 16 for _ in range(16)]
    for (i, j), v in entries.items():
        rows[i][j] = rows[j][i] = Fraction(v)
    return QuadForm16(tuple(map(tuple, rows)))


def test_theta_examples():
    assert theta_map(QuadForm16.identity()) == HermMatrix2.identity()
    # x1^0 x2^0: the matrix carries 1/2 in both symmetric slots
    T = theta_map(_form({(0, 8): half}))
    assert T == HermMatrix2(Fraction(0), Fraction(0), ONE / 16)


def test_h16_membership_examples():
    A = HermMatrix2(Fraction(1), Fraction(-2), Octonion([0, 1, 3, 0, 0, 2, 0, 1]))
    assert is_in_H16_0(j_map(A))
    assert not is_in_H16_0(_form({(0, 0): 1}))
    assert is_in_H16_0(QuadForm16.zero())


def test_line_average_examples():
    xi = V(Octonion([1, 2, 0, 0, 1, 0, 0, 3]), Octonion([0, 1, -1, 2, 0, 0, 4, 1]))
    assert line_average(QuadForm16.identity(), xi) == 1
    assert line_average(j_map(HermMatrix2(Fraction(2), Fraction(0), ZERO)), V(ZERO, ONE)) == 0


def test_quadform_text_roundtrip():
    B = j_map(HermMatrix2(Fraction(1, 3), Fraction(2), E[6]))
    assert parse_quadform(format_quadform(B)) == B


@given(herms)
def test_theta_after_j(A):
    assert theta_map(j_map(A)) == A


@given(octonions, octonions, octonions)
def test_line_contains_right_multiples(a, q, u):
    assume(q and u)
    line = OctLine(a)
    assert line_spanned(line.point(q)) == line_spanned(line.point(mul(q, u))) == line


@given(herms, vectors)
def test_j_is_quadratic_form_of_matrix(A, xi):
    lhs = j_map(A).evaluate(xi)
    rhs = A.a * norm_sq(xi.x1) + A.b * norm_sq(xi.x2) + 2 * inner(xi.x1, mul(A.q, xi.x2))
    assert lhs == rhs
