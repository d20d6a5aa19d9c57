import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lclab import dist
from lclab.errors import DomainError, SingularityError

# frozen from the quadrature-oracle run
PRODUCT_PDF_AT_1 = 0.13401624101699427
F1_MINUS_FM1 = 0.79100633699534767


def test_product_density_values():
    assert dist.normal_product_density(1.0) == pytest.approx(PRODUCT_PDF_AT_1, rel=1e-13)
    assert dist.normal_product_density(-1.0) == dist.normal_product_density(1.0)


def test_product_density_singularity():
    with pytest.raises(SingularityError):
        dist.normal_product_density(0.0)


def test_product_density_even_bit_exact():
    xs = np.array([1e-6, 0.37, 1.0, 4.2, 11.0])
    assert np.array_equal(dist.normal_product_density(xs), dist.normal_product_density(-xs))


def test_laplace_density_values():
    assert dist.laplace_density(0.0) == 0.5
    assert dist.laplace_density(math.log(2.0)) == pytest.approx(0.25, rel=1e-15)
    assert dist.laplace_density(-3.0) == pytest.approx(0.5 * math.exp(-3.0), rel=1e-15)
    xs = np.array([0.1, 1.0, 7.7])
    assert np.array_equal(dist.laplace_density(xs), dist.laplace_density(-xs))


def test_laplace_cdf_values():
    assert dist.laplace_cdf(0.0) == 0.5
    assert dist.laplace_cdf(40.0) == pytest.approx(1.0, abs=1e-17)
    assert dist.laplace_cdf(-math.log(2.0)) == pytest.approx(0.25, rel=1e-15)
    xs = np.linspace(-20, 20, 101)
    f = dist.laplace_cdf(xs)
    assert np.all(np.diff(f) >= 0.0)
    assert f[0] >= 0.0 and f[-1] <= 1.0


def test_normal_product_cdf():
    assert dist.normal_product_cdf(0.0) == 0.5
    assert dist.normal_product_cdf(40.0, 1e-12) == pytest.approx(1.0, abs=1e-12)
    spread = dist.normal_product_cdf(1.0, 1e-12) - dist.normal_product_cdf(-1.0, 1e-12)
    assert spread == pytest.approx(F1_MINUS_FM1, abs=1e-11)


def test_normal_product_cdf_rejects_bad_tol():
    with pytest.raises(DomainError):
        dist.normal_product_cdf(1.0, tol=-1.0)


@pytest.mark.parametrize("name", ["normal", "laplace", "normal-product"])
def test_builtin_densities_normalized(name):
    d = dist.builtin_density(name)
    assert dist.density_mass(d, 1e-10) == pytest.approx(1.0, abs=1e-8)


def test_builtin_density_unknown_name():
    with pytest.raises(ValueError):
        dist.builtin_density("cauchy")


@pytest.mark.parametrize("name", ["normal", "laplace", "normal-product"])
def test_log_pdf_consistent_with_pdf(name):
    d = dist.builtin_density(name)
    xs = np.array([1e-3, 0.1, 1.0, 5.0, 20.0, -0.4, -7.0])
    pdf = d.pdf(xs)
    keep = pdf > 1e-300
    assert np.allclose(np.exp(d.log_pdf(xs[keep])), pdf[keep], rtol=1e-12)


def test_cdf_density_consistency_central_difference():
    h = 1e-4
    for x in (0.5, 1.0, 2.0):
        prod = (dist.normal_product_cdf(x + h, 1e-12) - dist.normal_product_cdf(x - h, 1e-12)) / (2 * h)
        assert prod == pytest.approx(dist.normal_product_density(x), abs=1e-7)
        lap = (dist.laplace_cdf(x + h) - dist.laplace_cdf(x - h)) / (2 * h)
        assert lap == pytest.approx(dist.laplace_density(x), abs=1e-7)


def test_discretize_laplace_mass_defect():
    g = dist.discretize(dist.laplace(), 8.0, 1024)
    # tail mass 2 * int_8^inf exp(-x)/2 = exp(-8), up to the midpoint-rule bias
    assert g.mass_defect == pytest.approx(math.exp(-8.0), abs=3e-5)
    assert g.mass == pytest.approx(1.0, abs=1e-12)


def test_discretize_product_all_finite(product_grid):
    assert np.all(np.isfinite(product_grid.values))
    assert np.all(product_grid.values >= 0.0)
    assert product_grid.singular_points == (0.0,)
    # origin cells hold averages exceeding the adjacent point values
    n = product_grid.n_cells
    assert product_grid.values[n // 2] > product_grid.values[n // 2 + 1]


def test_discretize_normal_symmetric():
    g = dist.discretize(dist.standard_normal(), 8.0, 1024)
    assert np.array_equal(g.values, g.values[::-1])


def test_discretize_validates_arguments():
    with pytest.raises(ValueError):
        dist.discretize(dist.laplace(), 8.0, 63)
    with pytest.raises(ValueError):
        dist.discretize(dist.laplace(), 8.0, 62)
    with pytest.raises(ValueError):
        dist.discretize(dist.laplace(), -1.0, 64)


def test_grid_nodes_exclude_origin(product_grid):
    assert np.all(product_grid.nodes != 0.0)
    assert product_grid.step == pytest.approx(2 * 12.0 / 4096)


def test_moments(product_grid, laplace_grid):
    assert dist.moment(product_grid, 2) == pytest.approx(1.0, abs=2e-3)
    assert dist.moment(laplace_grid, 2) == pytest.approx(2.0, abs=2e-3)
    assert dist.moment(product_grid, 1) == pytest.approx(0.0, abs=1e-12)
    assert dist.moment(laplace_grid, 0) == pytest.approx(1.0, abs=1e-12)


def test_moment_rejects_large_order(product_grid):
    with pytest.raises(DomainError):
        dist.moment(product_grid, 9)
    with pytest.raises(DomainError):
        dist.moment(product_grid, -1)


def test_moment_refinement_ladder():
    errors = []
    for half_width, cells in ((8.0, 1024), (12.0, 4096), (16.0, 16384)):
        g = dist.discretize(dist.normal_product(), half_width, cells)
        errors.append(abs(dist.moment(g, 2) - 1.0))
    assert errors[0] > errors[1] > errors[2]


def test_csv_round_trip(product_selfdiff):
    text = product_selfdiff.to_csv()
    back = dist.GridDensity.from_csv(text)
    assert np.array_equal(back.values, product_selfdiff.values)
    assert back.half_width == pytest.approx(product_selfdiff.half_width, rel=1e-15)
    assert back.trusted_half_width == product_selfdiff.trusted_half_width
    assert back.singular_points == product_selfdiff.singular_points


def test_csv_rejects_malformed():
    with pytest.raises(ValueError):
        dist.GridDensity.from_csv("nope\n1,2\n")
    with pytest.raises(ValueError):
        dist.GridDensity.from_csv("x,density\n0.5,1\n1.5,1\n2.6,1\n3.5,1\n")


def test_grid_validation():
    with pytest.raises(ValueError):
        dist.GridDensity(1.0, np.array([1.0, 2.0, 3.0]))  # odd length
    with pytest.raises(ValueError):
        dist.GridDensity(1.0, np.array([1.0, -2.0]))
    with pytest.raises(ValueError):
        dist.GridDensity(-1.0, np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        dist.GridDensity(1.0, np.array([1.0, 2.0]), trusted_half_width=2.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=32, max_value=400))
def test_normalized_mass_is_one(ncells_half):
    rng = np.random.default_rng(ncells_half)
    values = rng.uniform(0.1, 3.0, size=2 * ncells_half)
    g = dist.GridDensity(5.0, values).normalized()
    assert g.mass == pytest.approx(1.0, abs=1e-12)
    assert g.raw_mass == pytest.approx(5.0 / ncells_half * values.sum(), rel=1e-12)
