import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nucs.errors import DegreeError, NotPerfectSquare
from nucs.poly import Poly, derivative, discriminant, perfect_square_root

coeff = st.floats(min_value=-50, max_value=50, allow_nan=False)


def test_evaluation_and_arithmetic():
    p, q = Poly(1.0, -2.0, 3.0), Poly(0.5, 4.0)
    assert p(2.0) == 1.0 - 4.0 + 12.0
    assert (p + q).coeffs == (1.5, 2.0, 3.0)
    assert (p - q).coeffs == (0.5, -6.0, 3.0)
    assert (-p).coeffs == (-1.0, 2.0, -3.0)
    assert (2 * p).coeffs == (2.0, -4.0, 6.0)


@pytest.mark.parametrize(
    "p, degree",
    [(Poly(), 0), (Poly(3.0), 0), (Poly(1.0, 2.0), 1), (Poly(0.0, 0.0, -1.0), 2), (Poly(1.0, 1e-15, 0.0), 0)],
)
def test_degree(p, degree):
    assert p.degree() == degree


def test_product_of_linears():
    assert (Poly(1.0, 1.0) * Poly(-1.0, 1.0)).coeffs == (-1.0, 0.0, 1.0)


def test_product_beyond_quadratic_raises():
    with pytest.raises(DegreeError):
        Poly(0.0, 1.0, 1.0) * Poly(0.0, 1.0)


def test_derivative():
    assert derivative(Poly(5.0, -3.0, 2.0)).coeffs == (-3.0, 4.0, 0.0)


def test_discriminant_needs_quadratic():
    assert discriminant(Poly(1.0, 2.0, 1.0)) == 0.0
    with pytest.raises(DegreeError):
        discriminant(Poly(1.0, 2.0))


@pytest.mark.parametrize(
    "p, root",
    [
        (Poly(0.25, 1.0, 1.0), Poly(0.5, 1.0)),  # (s + 1/2)^2
        (Poly(1.0, -2.0, 1.0), Poly(-1.0, 1.0)),  # (s - 1)^2
        (Poly(4.0), Poly(2.0)),
        (Poly(0.0), Poly(0.0)),
    ],
)
def test_perfect_square_root_examples(p, root):
    assert perfect_square_root(p).isclose(root, 1e-12)


@pytest.mark.parametrize("p", [Poly(1.0, 0.0, 1.0), Poly(0.0, 0.0, -1.0), Poly(-1.0), Poly(0.0, 1.0)])
def test_not_a_square(p):
    with pytest.raises(NotPerfectSquare):
        perfect_square_root(p)


@given(st.floats(min_value=1e-3, max_value=30), coeff)
def test_square_then_root_round_trips(a, b):
    q = Poly(b, a)
    root = perfect_square_root(q * q)
    assert math.isclose(root.c1, a, rel_tol=1e-9)
    assert math.isclose(root.c0, b, rel_tol=1e-9, abs_tol=1e-9)


@given(coeff, coeff, coeff, coeff)
def test_linear_product_commutes(a0, a1, b0, b1):
    p, q = Poly(a0, a1), Poly(b0, b1)
    assert (p * q).isclose(q * p, 1e-9)


@given(coeff, coeff, coeff, coeff, coeff, coeff)
def test_derivative_is_linear(a0, a1, a2, b0, b1, b2):
    p, q = Poly(a0, a1, a2), Poly(b0, b1, b2)
    assert derivative(p + q).isclose(derivative(p) + derivative(q), 1e-9)


def test_square_with_vanishing_leading_term():
    # (1 + 5e-9 s)^2 with the s^2 coefficient rounded away
    root = perfect_square_root(Poly(1.0, 1e-8, 0.0))
    assert root.isclose(Poly(1.0, 5e-9), 1e-15)


def test_linear_is_not_a_square():
    with pytest.raises(NotPerfectSquare):
        perfect_square_root(Poly(0.0, 1.0, 0.0))
