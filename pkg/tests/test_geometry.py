import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from gapcheck.geometry import (
    SPACE_NAMES,
    ChartDomainError,
    ball_volume,
    base_curvature,
    catalog,
    cylinder_density,
    cylinder_density_bessel,
    cylinder_laplacian_rho,
    cylinder_laplacian_rho_bessel,
    curvature_at,
    laplacian_rho_identity_check,
    metric_laplacian,
    orthonormal_frame,
)

# (R, lambda_max W+, lambda_max W-) for the calibrated normalizations
EXPECTED = {
    "R4": (0.0, 0.0, 0.0),
    "S4": (12.0, 0.0, 0.0),
    "H4": (-12.0, 0.0, 0.0),
    "S3xR": (6.0, 0.0, 0.0),
    "CP2": (24.0, 4.0, 0.0),
    "CH2": (-24.0, 2.0, 0.0),
}


@pytest.mark.parametrize("name", SPACE_NAMES)
def test_curvature_constants(name, rng):
    space = catalog(name)
    for x in space.sample(rng, 4):
        d = curvature_at(space, x)
        assert_allclose((d.scalar, d.lambda_max_plus, d.lambda_max_minus), EXPECTED[name], atol=1e-5)
        assert d.decomposition_residual() < 1e-6
        assert d.symmetry_residual() < 1e-10
        assert d.bianchi_residual() < 1e-8


def test_cp2_spectrum_shape():
    d = base_curvature(catalog("CP2"))
    assert_allclose(d.spectrum_plus, [4.0, -2.0, -2.0], atol=1e-4)


def test_s4_sectional_curvature_one():
    d = curvature_at(catalog("S4"), np.array([0.2, -0.1, 0.3, 0.05]))
    # frame components, convention R_1212 = sectional curvature
    assert_allclose(d.riemann[0, 1, 0, 1], 1.0, atol=1e-6)
    assert_allclose(d.riemann[1, 3, 1, 3], 1.0, atol=1e-6)
    assert_allclose(d.ricci, 3.0 * np.eye(4), atol=1e-6)


def test_orthonormal_frame(rng):
    a = rng.standard_normal((4, 4))
    g = a @ a.T + 4 * np.eye(4)
    e = orthonormal_frame(g)
    assert_allclose(e.T @ g @ e, np.eye(4), atol=1e-12)
    assert np.linalg.det(e) > 0


def test_domain_errors():
    with pytest.raises(ChartDomainError):
        curvature_at(catalog("H4"), np.array([0.9999, 0.0, 0.0, 0.0]))


@pytest.mark.parametrize("name", ["R4", "S4", "H4", "CP2", "CH2"])
def test_laplacian_of_distance_matches_profile(name):
    space = catalog(name)
    x = np.array([0.21, -0.13, 0.17, 0.08])
    lap, grad_sq = metric_laplacian(space, space.rho, x)
    rho = float(space.rho(x))
    assert_allclose(grad_sq, 1.0, atol=1e-6)
    assert_allclose(lap, float(space.laplacian_rho(rho)), rtol=1e-5)


@pytest.mark.parametrize("name", SPACE_NAMES)
def test_density_log_derivative(name):
    space = catalog(name)
    rho = np.array([0.3, 0.7, 1.1])
    h = 1e-5
    d = (space.log_volume_density(rho + h) - space.log_volume_density(rho - h)) / (2 * h)
    assert_allclose(d, space.laplacian_rho(rho), rtol=1e-6)


def test_total_volumes():
    assert_allclose(ball_volume(catalog("S4"), 10.0), 8 * np.pi**2 / 3, rtol=1e-9)
    assert_allclose(ball_volume(catalog("CP2"), 10.0), np.pi**2 / 2, rtol=1e-9)
    assert_allclose(ball_volume(catalog("R4"), 2.0), np.pi**2 / 2 * 16, rtol=1e-9)


def test_h4_ball_volume_matches_scipy():
    ref, _ = integrate.quad(lambda r: 2 * np.pi**2 * np.sinh(r) ** 3, 0, 3.0)
    assert_allclose(ball_volume(catalog("H4"), 3.0), ref, rtol=1e-9)


def test_cylinder_density_closed_form():
    r = np.linspace(0.05, np.pi, 40)
    assert_allclose(cylinder_density(r), cylinder_density_bessel(r), rtol=1e-10)
    assert_allclose(cylinder_laplacian_rho(r), cylinder_laplacian_rho_bessel(r), rtol=1e-8)


def test_cylinder_growth_is_linear():
    r = np.array([50.0, 100.0, 200.0])
    j = cylinder_density(r)
    # sphere area tends to 2 vol(S^3) = 4 pi^2 beyond the cut locus
    assert_allclose(j, 4 * np.pi**2, rtol=5e-3)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("rho", [0.01, 0.5, 2.0, 20.0])
def test_chm_identities(m, rho):
    res = laplacian_rho_identity_check(m, rho)
    assert res.square_residual < 1e-10
    assert res.derivative_residual < 1e-10


def test_growth_exponents():
    assert catalog("R4").growth_exponent == 4
    assert catalog("S3xR").growth_exponent == 1
    assert catalog("H4").growth_exponent is None
    assert catalog("S4").growth_exponent == 0
    with pytest.raises(KeyError):
        catalog("T4")
