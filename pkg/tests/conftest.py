"""Shared fixtures: the small menagerie of maps the suite exercises."""

import pytest

from dynamo.projective import RationalMapLift


def poly_lift(*affine_coeffs):
    """Lift of a polynomial given ascending affine coefficients (F1 = Y^d)."""
    d = len(affine_coeffs) - 1
    f1 = [1] + [0] * d
    return RationalMapLift.make(list(affine_coeffs), f1)


@pytest.fixture
def sq():
    """z^2"""
    return poly_lift(0, 0, 1)


@pytest.fixture
def basilica():
    """z^2 - 1"""
    return poly_lift(-1, 0, 1)


@pytest.fixture
def cheb2():
    """z^2 - 2"""
    return poly_lift(-2, 0, 1)


@pytest.fixture
def zsq_plus_1():
    """z^2 + 1"""
    return poly_lift(1, 0, 1)
