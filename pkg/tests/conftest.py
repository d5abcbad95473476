import math

import pytest

from ordergrowth import abelian, core, sl2tilde


@pytest.fixture(scope="session")
def int_model():
    return core.integer_model()


@pytest.fixture(scope="session")
def quadrant():
    return abelian.quadrant()


@pytest.fixture(scope="session")
def quadrant_model(quadrant):
    return abelian.cone_model(quadrant)


@pytest.fixture(scope="session")
def sl2_model():
    return sl2tilde.dynamical_model()


def v(*xs):
    return abelian.as_vector(xs)


def brute_gamma(model, g, h, n, lo=-200, hi=200):
    """min{p : g^p >= h^n} by a linear scan; no bracketing logic shared with core."""
    target = model.power(h, n)
    for p in range(lo, hi + 1):
        if model.leq(target, model.power(g, p)):
            return p
    raise AssertionError("scan range too small")


TWO_PI = 2 * math.pi
