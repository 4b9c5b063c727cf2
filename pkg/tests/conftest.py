from fractions import Fraction as Fr

import pytest
from hypothesis import HealthCheck, settings

from toric_seidel.catalog import hirzebruch_even, nef7, x4, x5
from toric_seidel.lattice_core import MomentPolytope

settings.register_profile("suite", deadline=None, max_examples=40, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

X4_PARAMS = (Fr(2), Fr(1, 4), Fr(1, 3), Fr(1, 5))
X5_PARAMS = X4_PARAMS + (Fr(1, 6),)


def eps_x4(mu, c1, c2, c3):
    """The two centroid coordinates of X4, as closed formulas in the capacities."""
    den = 3 * (c1 ** 2 + c2 ** 2 + c3 ** 2 - 2 * mu)
    e1 = (c1 ** 3 + 3 * c2 ** 2 - c2 ** 3 + c3 ** 3 - 3 * mu) / den
    e2 = (c1 ** 3 - c2 ** 3 - c3 ** 3 + 3 * c2 ** 2 * mu + 3 * c3 ** 2 * mu - 3 * mu ** 2) / den
    return e1, e2


@pytest.fixture(scope="session")
def X4():
    return x4(*X4_PARAMS)


@pytest.fixture(scope="session")
def X5():
    return x5(*X5_PARAMS)


@pytest.fixture(scope="session")
def NEF7():
    return nef7()


@pytest.fixture(scope="session")
def F2():
    return hirzebruch_even(1, 2)


@pytest.fixture(scope="session")
def square():
    return MomentPolytope(((1, 0), (0, 1), (-1, 0), (0, -1)), (1, 1, 0, 0))


@pytest.fixture(scope="session")
def nef7_context(NEF7):
    from toric_seidel.clutching_cohomology import cohomology_ring, standard_context
    cf = standard_context(NEF7, 1)
    return cf, cohomology_ring(cf)
