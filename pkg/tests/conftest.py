import pytest

from cmreg import (
    FreeModule,
    Polynomial,
    Presentation,
    ideal_to_cyclic_module,
    make_ring,
    ring_as_module,
)


@pytest.fixture(scope="session")
def R2():
    return make_ring(("x", "y"))


@pytest.fixture(scope="session")
def R3():
    return make_ring(("x", "y", "z"))


@pytest.fixture(scope="session")
def xy(R2):
    return Polynomial.variable(R2, 0), Polynomial.variable(R2, 1)


@pytest.fixture(scope="session")
def Rfree(R2):
    return ring_as_module(R2)


@pytest.fixture(scope="session")
def M_x2_xy(R2, xy):
    """R/(x^2, xy): the running example with reg 1, dim 1, depth 0."""
    x, y = xy
    return ideal_to_cyclic_module(R2, [x * x, x * y])


@pytest.fixture(scope="session")
def K_point(R2, xy):
    """The residue field R/(x, y)."""
    x, y = xy
    return ideal_to_cyclic_module(R2, [x, y])
