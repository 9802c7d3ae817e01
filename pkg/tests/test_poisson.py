import math

import numpy as np
import pytest
from scipy import integrate
from scipy.spatial.transform import Rotation

from splab.bounds import khavinson_constant
from splab.errors import DomainError
from splab.poisson import (
    BoundaryDensity,
    SphereGrid,
    aligned_grid,
    constant_density,
    coordinate_density,
    directional_constant,
    directional_constant_convergence,
    kink_latitude,
    poisson_eval,
    poisson_gradient,
    sign_witness,
    sphere_area,
    sphere_grid,
    verify_thm0,
)

SMALL = sphere_grid(64, 128)


def smooth_density(rng, scale=0.9):
    c, b = rng.standard_normal(), rng.standard_normal(3)
    A = rng.standard_normal((3, 3))
    A = 0.5 * (A + A.T)
    s = scale / (abs(c) + np.linalg.norm(b) + np.linalg.norm(A, 2))

    def value(zeta):
        zeta = np.atleast_2d(zeta)
        return s * (c + zeta @ b + np.einsum("ij,jk,ik->i", zeta, A, zeta))

    return BoundaryDensity(value, "quadratic")


def test_sphere_area():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi**2)
    with pytest.raises(DomainError):
        sphere_area(1)


@pytest.mark.parametrize("split", [None, -0.3, 0.7])
def test_grid_weights_sum_to_area(split):
    g = SphereGrid(32, 64, split)
    assert abs(g.weights.sum() - 4 * math.pi) < 1e-12
    assert np.allclose(np.linalg.norm(g.nodes, axis=1), 1.0)


def test_grid_validation():
    with pytest.raises(DomainError):
        SphereGrid(1, 64)
    with pytest.raises(DomainError):
        SphereGrid(8, 16, 1.0)


def test_constant_density_reproduced(rng):
    for _ in range(5):
        x = rng.standard_normal(3)
        x *= rng.uniform(0, 0.9) / np.linalg.norm(x)
        assert poisson_eval(constant_density(1.0), x) == pytest.approx(1.0, abs=1e-10)
        assert np.allclose(poisson_gradient(constant_density(1.0), x), 0.0, atol=1e-9)


def test_coordinate_density():
    zeta3 = coordinate_density(2)
    assert abs(poisson_eval(zeta3, np.zeros(3))) < 1e-14
    for r in (0.2, 0.5, 0.8):
        assert poisson_eval(zeta3, [0, 0, r]) == pytest.approx(r, abs=1e-8)
    for x in ([0.1, -0.3, 0.2], [0.0, 0.6, -0.5]):
        assert np.allclose(poisson_gradient(zeta3, x), [0, 0, 1], atol=1e-8)


def test_gradient_against_finite_differences(rng):
    phi = smooth_density(rng)
    x = np.array([0.2, -0.1, 0.35])
    h = 1e-4
    fd = [
        (poisson_eval(phi, x + h * e) - poisson_eval(phi, x - h * e)) / (2 * h) for e in np.eye(3)
    ]
    assert np.allclose(poisson_gradient(phi, x), fd, atol=1e-6)


def test_mean_value_against_scipy(rng):
    phi = smooth_density(rng)

    def integrand(theta, azimuth):
        z = np.array([[math.sin(theta) * math.cos(azimuth), math.sin(theta) * math.sin(azimuth), math.cos(theta)]])
        return phi(z)[0] * math.sin(theta)

    ref, _ = integrate.dblquad(integrand, 0, 2 * math.pi, 0, math.pi, epsabs=1e-13, epsrel=1e-13)
    assert poisson_eval(phi, np.zeros(3)) == pytest.approx(ref / (4 * math.pi), abs=1e-10)


def test_harmonicity(rng):
    phi = BoundaryDensity(lambda z: 0.3 * np.exp(np.atleast_2d(z) @ [1.0, 0.5, -0.2]), "exp")
    h = 1e-2
    for _ in range(5):
        x = rng.standard_normal(3)
        x *= rng.uniform(0, 0.7) / np.linalg.norm(x)
        lap = sum(poisson_eval(phi, x + h * e) + poisson_eval(phi, x - h * e) for e in np.eye(3))
        lap = (lap - 6 * poisson_eval(phi, x)) / h**2
        assert abs(lap) < 1e-4


def test_domain_errors():
    with pytest.raises(DomainError):
        poisson_eval(constant_density(1.0), [1.0, 0, 0])
    with pytest.raises(DomainError):
        poisson_eval(constant_density(1.5), [0, 0, 0])
    with pytest.raises(DomainError):
        directional_constant([0, 0, 0.2], [1.0, 1.0, 0])


def test_scalar_only_density():
    phi = BoundaryDensity(lambda z: float(z[2]), "zeta_3 scalar")
    assert poisson_eval(phi, [0, 0, 0.4], SMALL) == pytest.approx(0.4, abs=1e-8)


# --- directional constant --------------------------------------------------------

def test_kink_latitude_is_a_sign_change():
    from splab.kernels import poisson_directional_kernel

    for r in (0.0, 0.3, 0.8):
        t = kink_latitude(r)
        nodes = np.array([[math.sqrt(1 - t * t), 0, t]])
        assert abs(poisson_directional_kernel(np.array([0, 0, r]), np.array([0, 0, 1.0]), nodes)[0]) < 1e-12


def test_directional_constant_at_origin():
    for iota in ([0, 0, 1.0], [1.0, 0, 0], np.ones(3) / math.sqrt(3)):
        assert directional_constant(np.zeros(3), np.asarray(iota)) == pytest.approx(1.5, abs=1e-4)


@pytest.mark.parametrize("r", [0.0, 0.25, 0.5, 0.75])
def test_directional_constant_matches_khavinson(r):
    x, iota = np.array([0, 0, r]), np.array([0, 0, 1.0])
    # the default path splits the polar rule at the kink
    assert directional_constant(x, iota) == pytest.approx(khavinson_constant(3, r), abs=1e-10)
    # a dense unsplit grid is within the 1e-3 target too
    assert directional_constant(x, iota, SphereGrid(256, 512, 0.0)) == pytest.approx(khavinson_constant(3, r), abs=1e-3)


def test_convergence_self_check():
    value, change = directional_constant_convergence(np.array([0.1, 0.3, -0.2]), np.array([0.6, 0.0, 0.8]), SMALL)
    assert change < 1e-3
    assert value > 0


def test_directional_constant_rotation_invariant(rng):
    x = np.array([0.2, -0.3, 0.4])
    iota = np.array([0.0, 0.6, 0.8])
    base = directional_constant(x, iota)
    for R in Rotation.random(3, random_state=1).as_matrix():
        assert directional_constant(R @ x, R @ iota) == pytest.approx(base, abs=1e-8)


def test_antiparallel_direction_is_symmetric():
    x = np.array([0.3, 0.2, -0.4])
    u = x / np.linalg.norm(x)
    assert directional_constant(x, -u) == pytest.approx(directional_constant(x, u), abs=1e-12)


def test_radial_direction_dominates(rng):
    # C(x) = C(x, n_x) in R^3: other directions do not exceed the radial one
    x = np.array([0.0, 0.0, 0.6])
    radial = directional_constant(x, np.array([0, 0, 1.0]))
    for _ in range(5):
        iota = rng.standard_normal(3)
        iota /= np.linalg.norm(iota)
        assert directional_constant(x, iota) <= radial + 1e-4


# --- verify_thm0 ---------------------------------------------------------------------

def test_sign_witness_is_near_sharp():
    x = np.array([0.0, 0.0, 0.5])
    report = verify_thm0([sign_witness(x)], x, grid=aligned_grid(0.5))
    assert report.ratio >= 0.99
    assert report.margin >= 0


def test_sign_witness_off_axis():
    x = np.array([0.3, -0.1, 0.2])
    report = verify_thm0([sign_witness(x)], x, grid=aligned_grid(np.linalg.norm(x)))
    assert 0.99 <= report.ratio <= 1 + 1e-9


def test_two_component_example():
    phis = [coordinate_density(2, 0.5), coordinate_density(0, 0.5)]
    report = verify_thm0(phis, np.array([0, 0, 0.3]), p=3.0)
    assert report.margin >= 0


def test_constant_vector_data():
    report = verify_thm0([constant_density(0.3), constant_density(-0.2)], np.array([0.1, 0.2, 0.0]), p=2.0)
    assert report.lhs == pytest.approx(0.0, abs=1e-9)
    assert report.margin == pytest.approx(report.rhs, abs=1e-9)


def test_vector_data_outside_ball_rejected():
    phis = [constant_density(0.9), constant_density(0.9)]
    with pytest.raises(DomainError):
        verify_thm0(phis, np.zeros(3), p=2.0, grid=SMALL)


@pytest.mark.parametrize("seed", range(20))
def test_random_smooth_data(seed):
    rng = np.random.default_rng(seed)
    nu = int(rng.integers(1, 4))
    p = float(rng.choice([1.5, 2.0, 3.0]))
    phis = [smooth_density(rng, 0.95 / nu ** (1 / p)) for _ in range(nu)]
    x = rng.standard_normal(3)
    x *= rng.uniform(0, 0.9) / np.linalg.norm(x)
    assert verify_thm0(phis, x, p).margin >= -1e-6
