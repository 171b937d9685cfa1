import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import herms, traceless, vectors
from octoma import lie, randgen as R
from octoma.herm2 import (HermMatrix2, NotTraceless, OctMatrix2, OctVector2, act_generator,
                          is_positive_definite, rank_one)
from octoma.lines import OctLine, same_line
from octoma.octonion import E, ONE, ZERO, Octonion

DIAG = OctMatrix2.diag(ONE, -ONE)


def test_hat_examples():
    h = lie.hat(DIAG)
    assert h == [[int(i == j) * (1 if i < 8 else -1) for j in range(16)] for i in range(16)]
    zero = OctMatrix2(ZERO, ZERO, ZERO, ZERO)
    assert all(v == 0 for row in lie.hat(zero) for v in row)
    with pytest.raises(NotTraceless):
        lie.hat(OctMatrix2.identity())


@given(traceless(), vectors)
def test_hat_matches_direct_evaluation(A, xi):
    h = lie.hat(A)
    x = xi.coords()
    assert [sum(h[i][k] * x[k] for k in range(16)) for i in range(16)] == list(A.apply(xi).coords())


def test_rho_examples():
    rho = lie.rho_matrix(DIAG)
    v = [sum(rho[i][k] * c for k, c in enumerate(HermMatrix2.identity().vector10())) for i in range(10)]
    assert v == [-2, 2] + [0] * 8
    zero = OctMatrix2(ZERO, ZERO, ZERO, ZERO)
    assert all(x == 0 for row in lie.rho_matrix(zero) for x in row)


@given(traceless())
def test_rho_columns_are_generator_action(A):
    rho = lie.rho_matrix(A)
    for k, X in enumerate(lie.herm_basis()):
        assert [rho[i][k] for i in range(10)] == list(act_generator(A, X).vector10())


def test_exp_word_examples():
    assert np.array_equal(lie.exp_word([]).rep16, np.eye(16))
    t = 0.3
    g = lie.exp_word([(DIAG, t)]).rep16
    expect = np.diag([math.exp(t)] * 8 + [math.exp(-t)] * 8)
    assert np.allclose(g, expect, atol=1e-14)


def test_t_map_examples():
    x, y = OctVector2(ONE, ZERO), OctVector2(ZERO, ONE)
    h = Fraction(1, 2)
    assert lie.t_map(x, y) == HermMatrix2(Fraction(0), Fraction(0), ONE * h)
    xi = OctVector2(ONE, E[1])
    assert lie.t_map(xi, xi) == rank_one(xi)
    assert lie.t_map(xi, x) == HermMatrix2(Fraction(1), Fraction(0), -E[1] * h)


def test_duality_examples():
    xi = OctVector2(Octonion([1, 2, 0, 1, 0, 0, 3, 0]), Octonion([0, 1, 1, 0, 2, 0, 0, 1]))
    eta = OctVector2(Octonion([2, 0, 1, 0, 0, 1, 0, 0]), Octonion([1, 1, 0, 0, 0, 0, 1, 2]))
    a, b = lie.dual_check(OctMatrix2.identity(), xi, eta)
    assert a == b
    a, b = lie.dual_check(OctMatrix2.diag(E[1], E[2]), xi, eta)
    assert a == b


@given(traceless(), vectors, vectors)
def test_duality(A, xi, eta):
    a, b = lie.dual_check(A, xi, eta)
    assert a == b


@given(traceless(), vectors)
def test_equiv_need(A, xi):
    lhs, rhs = lie.equiv_need_sides(A, xi)
    assert lhs == rhs


@given(herms, traceless(), vectors)
def test_jjj(X, A, xi):
    lhs, rhs = lie.jjj_sides(X, A, xi)
    assert lhs == rhs


@given(traceless())
def test_hat_dual_is_transpose(A):
    assert lie.transpose(lie.hat(A)) == lie.hat(lie.hat_dual(A))


def _words(seed, n):
    rng = R.stream(seed, "test_lie.words")
    for _ in range(n):
        yield rng, lie.exp_word([(lie.random_generator(rng, 0.5), float(rng.uniform(-1, 1))) for _ in range(4)])


def _unit(v):
    return v.scale(1 / math.sqrt(v.norm_sq()))


def test_group_words_conformal_and_unimodular():
    for rng, g in _words(1, 40):
        assert abs(np.linalg.det(g.rep16) - 1) < 1e-8
        line = OctLine(R.float_octonion(rng))
        p, q = _unit(line.point(R.float_octonion(rng))), _unit(line.point(R.float_octonion(rng)))
        gp, gq = g.apply(p), g.apply(q)
        assert math.isclose(gp.norm_sq(), gq.norm_sq(), rel_tol=1e-7)
        assert same_line(_unit(gp), _unit(gq), tol=1e-7)


def test_group_words_preserve_cone_and_match_forms():
    for rng, g in _words(2, 40):
        X = R.float_pd_herm(rng)
        assert is_positive_definite(g.act(X))
        a, b = g.act(X).vector10(), lie.action_via_forms(g, X).vector10()
        assert max(abs(x - y) for x, y in zip(a, b)) <= 1e-7 * (1 + max(map(abs, a)))
