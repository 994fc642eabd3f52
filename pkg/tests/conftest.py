import numpy as np
import pytest

from varheat import SeriesSpec, build_travel_time, make_conductivity

# Closed form 2*sqrt(6)*asin(1/sqrt(3)), confirmed by adaptive quadrature.
PARABOLIC_TAU_TOTAL = 3.015222466558585


@pytest.fixture(scope="session")
def parabolic():
    c = make_conductivity("parabolic24")
    return c, build_travel_time(c)


@pytest.fixture(scope="session")
def const1():
    c = make_conductivity("constant", c=1.0)
    return c, build_travel_time(c)


@pytest.fixture(scope="session")
def const2():
    c = make_conductivity("constant", c=2.0)
    return c, build_travel_time(c)


@pytest.fixture(scope="session")
def rational():
    c = make_conductivity("rational9000")
    return c, build_travel_time(c)


@pytest.fixture(scope="session")
def spec2():
    return SeriesSpec(truncation_N=2, quad_order=32)


@pytest.fixture(scope="session")
def spec3():
    return SeriesSpec(truncation_N=3, quad_order=32)


def quadratic(x):
    return x * (1.0 - x)


def sine(x):
    return np.sin(np.pi * x)
