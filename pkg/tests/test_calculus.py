import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contactkit.geomcore import Chart, OneFormDef, VectorFieldDef, d_oneform, lie_bracket
from contactkit.geomcore.chart import sample_box

QPZ = ("q", "p", "z")


def test_d_of_p_dq():
    A = d_oneform(OneFormDef(["p", "0", "0"], QPZ), [0.3, 0.7, 1.0]).A
    assert A[1][0] == 1.0 and A[0][1] == -1.0
    assert np.count_nonzero(np.array(A)) == 2


def test_d_of_dz_is_zero():
    assert not np.any(np.array(d_oneform(OneFormDef(["0", "0", "1"], QPZ), [1, 2, 3]).A))


@pytest.mark.parametrize("u", [0.3, math.pi / 4, 1.2])
def test_hopf_dalpha(u):
    A = np.array(d_oneform(OneFormDef(["0", "cos(u)^2", "sin(u)^2"], ("u", "t1", "t2")), [u, 0.1, 0.2]).A)
    assert A[0, 1] == pytest.approx(-math.sin(2 * u), abs=1e-15)
    assert A[0, 2] == pytest.approx(math.sin(2 * u), abs=1e-15)
    assert np.array_equal(A, -A.T)


def test_lie_brackets():
    qp = ("q", "p")
    dq, dp = VectorFieldDef(["1", "0"], qp), VectorFieldDef(["0", "1"], qp)
    assert lie_bracket(dq, dp, [0.4, 0.1]).tolist() == [0.0, 0.0]
    assert lie_bracket(dq, VectorFieldDef(["0", "q"], qp), [0.4, 0.1]).tolist() == [0.0, 1.0]
    X, Y = VectorFieldDef(["0", "q"], qp), VectorFieldDef(["p", "0"], qp)
    assert lie_bracket(X, Y, [1.0, 2.0]).tolist() == [1.0, -2.0]


def _flow_commutator(X, Y, x, t):
    """exp(-tY) exp(-tX) exp(tY) exp(tX) x via RK4 steps; equals t^2 [X,Y] + O(t^3)."""
    from scipy.integrate import solve_ivp

    def go(F, s, y):
        return solve_ivp(lambda _, v: F(v), (0, s), y, rtol=1e-12, atol=1e-14).y[:, -1]

    y = go(X, t, x)
    y = go(Y, t, y)
    y = go(lambda v: -X(v), t, y)
    y = go(lambda v: -Y(v), t, y)
    return (y - x) / t**2


def test_bracket_against_flow_commutator():
    X = VectorFieldDef(["sin(p)", "q*p"], ("q", "p"))
    Y = VectorFieldDef(["p^2", "cos(q)"], ("q", "p"))
    x = np.array([0.3, -0.4])
    est = [_flow_commutator(X, Y, x, t) for t in (1e-2, 5e-3)]
    richardson = 2 * est[1] - est[0]
    assert np.allclose(richardson, lie_bracket(X, Y, x), atol=1e-4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3))
def test_bracket_exactly_antisymmetric(x):
    X = VectorFieldDef(["sin(p)*z", "q*p", "exp(0.1*z)"], QPZ)
    Y = VectorFieldDef(["p^2", "cos(q)+z", "q"], QPZ)
    assert np.array_equal(lie_bracket(X, Y, x), -lie_bracket(Y, X, x))


def test_bracket_bilinear():
    X = VectorFieldDef(["sin(p)*z", "q*p", "1"], QPZ)
    Y = VectorFieldDef(["p^2", "cos(q)", "q"], QPZ)
    W = VectorFieldDef(["q", "z", "p*q"], QPZ)
    XW = VectorFieldDef(["sin(p)*z + 2*q", "q*p + 2*z", "1 + 2*p*q"], QPZ)
    x = [0.2, 0.5, -0.3]
    lhs = lie_bracket(XW, Y, x)
    rhs = lie_bracket(X, Y, x) + 2 * lie_bracket(W, Y, x)
    assert np.allclose(lhs, rhs, atol=1e-14)


def test_chart_samples_are_deterministic_and_inside():
    c = Chart(("u", "t"), (False, True), ((0.0, 1.0), (0.0, 2 * math.pi)))
    a, b = c.samples(64, seed=3), c.samples(64, seed=3)
    assert a.shape == (64, 2) and np.array_equal(a, b)
    assert np.all(a[:, 0] >= 0.05) and np.all(a[:, 0] <= 0.95)
    assert not np.array_equal(a, c.samples(64, seed=4))


def test_sample_box_shape():
    assert sample_box([(0, 1)] * 5, 64, 0).shape == (64, 5)


def test_chart_validation():
    with pytest.raises(ValueError):
        Chart(("a", "b"), (False,), ((0, 1), (0, 1)))
