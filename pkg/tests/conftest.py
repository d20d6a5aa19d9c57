import pytest

from lclab import dist, transform

# The default desk-scale grid (half-width 12, 4096 cells) is shared across
# test modules; building it is cheap but not free, so cache per session.


@pytest.fixture(scope="session")
def product_grid():
    return dist.discretize(dist.normal_product(), 12.0, 4096)


@pytest.fixture(scope="session")
def laplace_grid():
    return dist.discretize(dist.laplace(), 12.0, 4096)


@pytest.fixture(scope="session")
def normal_grid():
    return dist.discretize(dist.standard_normal(), 12.0, 4096)


@pytest.fixture(scope="session")
def product_selfdiff(product_grid):
    return transform.self_difference(product_grid)
