import math
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import herms, pd_herms, traceless, vectors
from octoma.herm2 import (HermMatrix2, HermParseError, NotPositiveDefinite, OctMatrix2, OctVector2,
                          SingularMatrix, act_generator, act_scalar, adj, det, diagonalize, format_herm,
                          inverse, is_positive_definite, matmul, mixed_det, parse_herm, quad, rank_one,
                          re_trace, simultaneous_reduce, spectrum, sylvester_margin, tr)
from octoma.octonion import E, ONE, ZERO, Octonion

e1 = E[1]


def H(a, b, q=ZERO):
    return HermMatrix2(Fraction(a), Fraction(b), q)


I2 = HermMatrix2.identity()


def test_det_examples():
    assert det(I2) == 1
    assert det(H(2, 3, e1)) == 5
    z = OctVector2(Octonion([1, 2, 0, 0, 3, 0, 0, 1]), Octonion([0, -1, 2, 0, 0, 5, 0, 0]))
    assert det(rank_one(z)) == 0


def test_mixed_det_examples():
    assert mixed_det(H(1, 2), H(3, 4)) == 5
    B = H(3, 7, Octonion([0, 1, 2, 0, 0, 0, 0, 3]))
    assert mixed_det(I2, B) == tr(B) / 2


def test_adj_inverse():
    assert adj(H(1, 2)) == H(2, 1)
    assert inverse(H(2, 3, e1)) == H(3, 2, -e1).scale(Fraction(1, 5))
    with pytest.raises(SingularMatrix):
        inverse(rank_one(OctVector2(ONE, e1)))


def test_sylvester_examples():
    assert is_positive_definite(I2)
    assert not is_positive_definite(H(1, 1, 2 * e1))
    assert not is_positive_definite(H(0, 1))
    assert sylvester_margin(I2) == 1


def test_spectrum_examples():
    assert spectrum(H(3, 5)) == (3, 5)
    assert spectrum(H(0, 0, e1)) == (-1, 1)
    assert spectrum(I2) == (1, 1)


def test_rank_one_examples():
    assert rank_one(OctVector2(ONE, ZERO)) == H(1, 0)
    assert rank_one(OctVector2(ONE, e1)) == H(1, 1, -e1)
    assert rank_one(OctVector2(ZERO, ZERO)) == H(0, 0)


def _close(A, B, tol=1e-10):
    A, B = A.to_float(), B.to_float()
    return max(abs(x - y) for x, y in zip(A.vector10(), B.vector10())) <= tol


def test_diagonalize_examples():
    d = diagonalize(H(2, 7))
    assert d.D == H(2, 7) and d.g == OctMatrix2.identity()
    assert [round(v, 12) for v in sorted(diagonalize(H(0, 0, e1).to_float()).D.vector10()[:2])] == [-1, 1]
    D = diagonalize(rank_one(OctVector2(ONE, e1)).to_float()).D
    assert all(abs(x - y) < 1e-12 for x, y in zip(sorted(D.vector10()[:2]), [0.0, 2.0]))


def test_simultaneous_reduce_examples():
    c, D, _ = simultaneous_reduce(I2, H(1, 2))
    assert c == 1 and sorted(D.to_float().vector10()[:2]) == [1.0, 2.0]
    c, _, _ = simultaneous_reduce(H(1, 4), I2)
    assert math.isclose(c, 2.0)
    with pytest.raises(NotPositiveDefinite):
        simultaneous_reduce(H(0, 1), I2)


def test_generator_action_examples():
    A = OctMatrix2.diag(ONE, -ONE)
    assert act_generator(A, I2) == H(-2, 2)
    assert act_generator(A, HermMatrix2.zero()) == HermMatrix2.zero()
    X = H(3, -1, E[5])
    assert act_scalar(1, X) == X.scale(-2)


def test_parse_herm():
    A = parse_herm("[[2, e1],[conj, 3]]")
    assert A == H(2, 3, e1) and det(A) == 5
    assert parse_herm(format_herm(A)) == A
    with pytest.raises(HermParseError) as err:
        parse_herm("[[2, e1],[e1, 3]]")
    assert err.value.col is not None


@given(herms)
def test_mixed_det_diagonal(A):
    assert mixed_det(A, A) == det(A)


@given(herms, herms)
def test_mixed_det_adjugate(A, B):
    assert mixed_det(A, B) == re_trace(matmul(adj(A), B)) / 2


@given(pd_herms(), pd_herms())
def test_mixed_det_positive(A, B):
    assert mixed_det(A, B) > 0


@given(pd_herms(), vectors)
def test_pd_quadratic_form_positive(A, xi):
    v = quad(xi, A)
    assert v > 0 if not xi.is_zero() else v == 0


@given(herms)
def test_adjugate_product(A):
    P = matmul(adj(A), A)
    assert P.m11 == ONE * det(A) == P.m22 and P.m12 == ZERO == P.m21


@given(traceless(), herms)
def test_generator_action_hermitian_linear(A, X):
    Y = act_generator(A, X + X)
    assert Y == act_generator(A, X).scale(2)


@given(pd_herms())
def test_diagonalize_preserves_spectrum(A):
    d = diagonalize(A.to_float())
    s0, s1 = spectrum(A.to_float()), sorted(d.D.to_float().vector10()[:2])
    assert all(abs(x - y) <= 1e-9 * (1 + abs(x)) for x, y in zip(s0, s1))


@given(pd_herms(), herms)
def test_simultaneous_reduce_record(A, B):
    c, D, rec = simultaneous_reduce(A, B)
    assert _close(rec.apply(A.to_float()), HermMatrix2.identity("float").scale(c), 1e-7 * (1 + c))
    assert _close(rec.apply(B.to_float()), D, 1e-7 * (1 + max(abs(v) for v in B.to_float().vector10())))
