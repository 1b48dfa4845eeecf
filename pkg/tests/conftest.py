import math

import numpy as np
import pytest

from bcsfield import ConstantDiagonal, Cosine1D, MultiOrbitalDiagonal

U_DEFAULT = -0.125


@pytest.fixture(scope="session")
def constant_model():
    return ConstantDiagonal(1, 1.0)


@pytest.fixture(scope="session")
def figure2_model():
    return MultiOrbitalDiagonal(8, 7, 1.0, 7.0)


@pytest.fixture(scope="session")
def cosine_model():
    return Cosine1D(1.0, 1.0)


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def second_diff(f, x, h):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
