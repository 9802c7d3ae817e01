import math

import numpy as np
import pytest

from splab.bounds import derivative_pair, polydisc_sp_check
from splab.errors import DomainError
from splab.extremals import (
    align_unitary,
    ball_automorphism,
    colonna_extremal,
    colonna_values,
    colonna_wirtinger,
    fm_closed_form,
    fm_series,
    fm_truncation_bound,
    mobius,
    mobius_inverse,
    polydisc_extremal,
    polydisc_extremal_closed,
    thm2plus_extremal,
    thm3plus_extremal,
)
from splab.gradients import directional_sup, grad_norm_1d
from splab.multiindex import MultiIndex
from splab.series import evaluate, lp_norm, sample_sphere

M = MultiIndex.of


def ball_points(rng, n, count, radius=0.999):
    z = sample_sphere(n, 2.0, count, rng)
    return z * (radius * rng.random((count, 1)) ** (1 / (2 * n)))


# --- Colonna extremal -----------------------------------------------------------

def test_colonna_values():
    assert colonna_extremal(0.7) == 0.0
    assert colonna_extremal(0.5j) == pytest.approx((2 / math.pi) * math.atan(4 / 3))
    with pytest.raises(DomainError):
        colonna_extremal(1.0)


def test_colonna_range(rng):
    z = ball_points(rng, 1, 1000)[:, 0]
    v = colonna_values(z)
    assert np.all(np.abs(v) < 1)


def test_colonna_wirtinger_against_fd(rng):
    h = 1e-6
    for z in ball_points(rng, 1, 10, 0.9)[:, 0]:
        dg, dgbar = colonna_wirtinger(z)
        dx = (colonna_values(z + h) - colonna_values(z - h)) / (2 * h)
        dy = (colonna_values(z + 1j * h) - colonna_values(z - 1j * h)) / (2 * h)
        assert dg == pytest.approx(0.5 * (dx - 1j * dy), abs=1e-7)
        assert dgbar == pytest.approx(np.conj(dg))


def test_colonna_gradient_at_origin():
    f, _ = thm2plus_extremal([0.0])
    assert grad_norm_1d(f, 0.0, 2.0) == pytest.approx(4 / math.pi, abs=1e-12)


# --- Mobius maps -----------------------------------------------------------------------

def test_mobius_basics(rng):
    assert mobius(0)(0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)
    a = 0.4 - 0.3j
    assert abs(mobius(a)(-a)) < 1e-15
    for theta in np.linspace(0, 2 * math.pi, 17):
        assert abs(mobius(a)(0.999 * np.exp(1j * theta))) < 1
    with pytest.raises(DomainError):
        mobius(1.0)


def test_mobius_inverse_identity(rng):
    for _ in range(100):
        a = complex(*rng.uniform(-0.6, 0.6, 2))
        z = complex(*rng.uniform(-0.7, 0.7, 2))
        assert abs(mobius_inverse(a)(mobius(a)(z)) - z) < 1e-12


def test_mobius_derivative_fd():
    a, z, h = 0.3 + 0.5j, -0.2 + 0.1j, 1e-6
    fd = (mobius(a)(z + h) - mobius(a)(z - h)) / (2 * h)
    assert mobius(a).derivative(z) == pytest.approx(fd, abs=1e-8)


# --- ball automorphisms -------------------------------------------------------------

def test_align_unitary(rng):
    for n in (1, 2, 4):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        U = align_unitary(a)
        assert np.allclose(U.conj().T @ U, np.eye(n), atol=1e-13)
        target = np.zeros(n, dtype=complex)
        target[0] = np.linalg.norm(a)
        assert np.allclose(U @ a, target, atol=1e-13)


def test_ball_automorphism(rng):
    xi = np.array([0.3 + 0.2j, -0.4j, 0.1])
    phi = ball_automorphism(xi)
    assert np.linalg.norm(phi(xi)) < 1e-12
    z = ball_points(rng, 3, 100)
    assert np.all(np.linalg.norm(phi(z), axis=1) < 1)
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    assert np.allclose(phi.project(w) + phi.project_complement(w), w, atol=1e-12)
    # the automorphism identity 1 - |phi(z)|^2 = (1-|xi|^2)(1-|z|^2)/|1-<z,xi>|^2
    for zz in z[:10]:
        lhs = 1 - np.linalg.norm(phi(zz)) ** 2
        rhs = (1 - np.linalg.norm(xi) ** 2) * (1 - np.linalg.norm(zz) ** 2) / abs(1 - np.vdot(xi, zz)) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_ball_automorphism_at_zero(rng):
    phi = ball_automorphism(np.zeros(2))
    for z in ball_points(rng, 2, 20):
        assert np.linalg.norm(phi(z)) == pytest.approx(np.linalg.norm(z))


# --- gradient extremal ---------------------------------------------------------------

@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_thm2plus_extremal_sharp(p, rng):
    for _ in range(10):
        a = sample_sphere(3, 2.0, 1, rng)[0] * rng.uniform(0, 0.9)
        f, predicted = thm2plus_extremal(a, 2, p)
        assert np.max(np.abs(f.value(a))) < 1e-14
        ratio = directional_sup(f, a, p) / predicted
        assert abs(ratio - 1) < 1e-6


def test_thm2plus_extremal_inside_ball(rng):
    a = np.array([0.5j, 0.2])
    f, _ = thm2plus_extremal(a, 2, 3.0)
    vals = f.values(ball_points(rng, 2, 1000))
    assert np.max(lp_norm(vals, 3.0, axis=-1)) < 1
    assert np.max(np.abs(vals.imag)) == 0


def test_thm2plus_extremal_at_zero(rng):
    f, _ = thm2plus_extremal(np.zeros(2), 1, 2.0)
    z = ball_points(rng, 2, 20)
    assert np.allclose(f.values(z)[:, 0].real, colonna_values(z[:, 0]))


def test_thm2plus_jacobian_fd():
    a = np.array([0.2 - 0.3j, 0.4])
    f, _ = thm2plus_extremal(a, 1, 2.0)
    z = np.array([0.1 + 0.1j, -0.2j])
    J, K = f.jacobians(z)
    h = 1e-6
    for k in range(2):
        e = np.zeros(2)
        e[k] = 1
        dx = (f.value(z + h * e) - f.value(z - h * e)) / (2 * h)
        dy = (f.value(z + 1j * h * e) - f.value(z - 1j * h * e)) / (2 * h)
        assert J[0, k] == pytest.approx(0.5 * (dx - 1j * dy)[0], abs=1e-7)
        assert K[0, k] == pytest.approx(0.5 * (dx + 1j * dy)[0], abs=1e-7)


# --- polydisc extremals --------------------------------------------------------------

def test_thm3plus_extremal(rng):
    a = np.array([0.5 - 0.2j, 0.3j])
    f = thm3plus_extremal(a, 2)
    assert abs(f.value(a)[0]) < 1e-15
    J, _ = f.jacobians(a)
    assert J[0, 0] == pytest.approx(1 / (1 - abs(a[0]) ** 2))
    assert polydisc_sp_check(f, a)[0].ratio == pytest.approx(1.0, abs=1e-9)
    z = sample_sphere(2, math.inf, 1000, rng) * rng.uniform(0, 0.999, (1000, 1))
    assert np.max(np.linalg.norm(f.values(z), axis=1)) < 1


def test_polydisc_extremal_series(rng):
    f = polydisc_extremal(3, 1, 12)
    assert evaluate(f, np.zeros(3)) == 0
    assert {abs(c) for c in f.a_coeffs.values()} == {2.0}
    assert not f.b_coeffs
    z = sample_sphere(3, math.inf, 500, rng) * rng.uniform(0, 0.999, (500, 1))
    assert np.all(polydisc_extremal_closed(z, 1).real < 1)
    small = z * 0.3
    assert np.allclose(f.evaluate_many(small), polydisc_extremal_closed(small, 1), atol=1e-5)
    for k in (1, 2, 3):
        dh, dg = derivative_pair(f, MultiIndex.unit(3, 1, k), np.zeros(3))
        assert dh == -2 * math.factorial(k) and dg == 0


def test_polydisc_extremal_validation():
    with pytest.raises(DomainError):
        polydisc_extremal(2, 2, 3)
    with pytest.raises(DomainError):
        polydisc_extremal(2, 0, 0)


# --- f_m -------------------------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3])
def test_fm_coefficients(m):
    f = fm_series(m, 5)
    assert abs(f.a(M(m))) == pytest.approx(2 / math.pi)
    assert abs(f.b(M(m))) == pytest.approx(2 / math.pi)
    assert set(f.support()) == {M(m * (2 * j - 1)) for j in range(1, 6)}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_fm_derivative_pair(m):
    dh, dg = derivative_pair(fm_series(m, 6), M(m), [0.0])
    assert abs(dh) + abs(dg) == pytest.approx((4 / math.pi) * math.factorial(m), abs=1e-9)


@pytest.mark.parametrize("m,terms", [(1, 5), (2, 3), (3, 10)])
def test_fm_truncation_error(m, terms, rng):
    z = ball_points(rng, 1, 200, 0.9)[:, 0]
    vals = fm_series(m, terms).evaluate_many(z[:, None]).real
    err = np.abs(vals - fm_closed_form(z, m))
    bounds = np.array([fm_truncation_bound(zz, m, terms) for zz in z])
    assert np.all(err <= bounds + 1e-13)


def test_fm_closed_form_range(rng):
    z = ball_points(rng, 1, 1000)[:, 0]
    assert np.all(np.abs(fm_closed_form(z, 3)) < 1)
