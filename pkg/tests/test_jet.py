import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contactkit.errors import DomainError
from contactkit.geomcore import ScalarField, eval_jet, parse
from contactkit.geomcore import jet as J

from conftest import fd_gradient

QPZ = ("q", "p", "z")


def test_product_rule():
    j = eval_jet(parse("p*q"), [2.0, 3.0, 0.0], QPZ)
    assert j.value == 6.0
    assert j.gradient.tolist() == [3.0, 2.0, 0.0]


def test_sin_at_zero():
    j = eval_jet(parse("sin(z)"), [0.0, 0.0, 0.0], QPZ)
    assert j.value == 0.0 and j.gradient.tolist() == [0.0, 0.0, 1.0]


def test_constant_has_zero_gradient():
    j = J.as_jet(ScalarField("3.5*2", QPZ).jet([1.0, 2.0, 3.0]), 3)
    assert j.gradient.tolist() == [0.0, 0.0, 0.0]


def test_quadratic_against_finite_difference():
    f = ScalarField("1 - y1^2", ("y1",))
    j = J.as_jet(f.jet([1.0]), 1)
    assert j.value == 0.0
    assert j.gradient[0] == -2.0
    assert abs(fd_gradient(f, [1.0])[0] + 2.0) <= 1e-9


def test_domain_errors_name_the_point():
    with pytest.raises(DomainError):
        ScalarField("log(q)", QPZ)([-1.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        ScalarField("1/(q - p)", QPZ)([1.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        ScalarField("sqrt(q)", QPZ).jet([0.0, 0.0, 0.0])


SMOOTH = [
    "sin(q)*cos(p) + z^2",
    "exp(0.3*q - p)*(1 + z)",
    "log(2 + q^2)*sqrt(3 + p*p)",
    "tan(0.2*q)/(2 + cos(z))",
    "q^3 - 2*q*p*z + (1.5 + sin(p))^2.5",
    "(2 + q^2)^(0.5*p)",
]


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(SMOOTH),
    st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3),
)
def test_gradient_matches_central_differences(text, x):
    f = ScalarField(text, QPZ)
    g = J.as_jet(f.jet(x), 3).gradient
    fd = fd_gradient(f, x)
    assert np.allclose(g, fd, rtol=1e-7, atol=1e-7)


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from(SMOOTH),
    st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3),
)
def test_second_order_matches_differenced_gradient(text, x):
    f = ScalarField(text, QPZ)
    hess = np.array([J.partial(J.partial(f.jet(x, 2), i), j) for i in range(3) for j in range(3)], dtype=object)
    hess = np.array([J.scalar(h) for h in hess]).reshape(3, 3)
    fd = np.array([fd_gradient(lambda y, i=i: J.as_jet(f.jet(y), 3).gradient[i], x) for i in range(3)])
    assert np.allclose(hess, fd, rtol=1e-6, atol=1e-6)
    # mixed partials agree to rounding (they are computed along different paths)
    assert np.allclose(hess, hess.T, rtol=1e-12, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(SMOOTH),
    st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3),
)
def test_d_of_exact_form_vanishes(text, x):
    f = ScalarField(text, QPZ)
    from contactkit.geomcore.calculus import d_matrix

    first = f.jet(x, 2)
    A = d_matrix([J.partial(first, i) for i in range(3)])
    assert np.max(np.abs(np.array(A, dtype=float))) <= 1e-9


def test_jet_arithmetic_rules():
    x, y = J.variables([1.5, -0.5], 1)
    assert J.as_jet(x * y, 2).gradient.tolist() == [-0.5, 1.5]
    assert J.as_jet(x / y, 2).gradient.tolist() == [-2.0, -6.0]
    assert J.as_jet(2.0 - x, 2).gradient.tolist() == [-1.0, 0.0]
