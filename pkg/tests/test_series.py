import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splab.errors import AliasingError, DomainError, SeriesFormatError
from splab.extremals import fm_closed_form, fm_series, polydisc_extremal
from splab.multiindex import MultiIndex, enumerate_up_to, sup_monomial_pball
from splab.series import (
    PluriharmonicMap,
    PowerSeriesPair,
    derivative_at,
    evaluate,
    extract_coefficients,
    format_series,
    homogeneous_part_sup,
    parse_series,
    partial_derivative,
    random_pluriharmonic,
    random_re_le_one,
    read_series,
    sup_norm_estimate,
    write_series,
)

M = MultiIndex.of


def random_series(rng, n, cap, decay=0.8):
    a, b = {}, {}
    for alpha in enumerate_up_to(n, cap):
        a[alpha] = decay**alpha.degree * complex(*rng.standard_normal(2))
        if alpha.degree:
            b[alpha] = decay**alpha.degree * complex(*rng.standard_normal(2))
    return PowerSeriesPair(n, cap, a, b)


def interior_point(rng, n, radius=0.8):
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z * rng.uniform(0.05, radius) / np.linalg.norm(z)


# --- construction and evaluation ------------------------------------------

def test_invariants():
    with pytest.raises(DomainError):
        PowerSeriesPair(1, 2, {}, {M(0): 1.0})
    with pytest.raises(DomainError):
        PowerSeriesPair(2, 1, {M(2, 0): 1.0})
    with pytest.raises(DomainError):
        PowerSeriesPair(2, 3, {M(1): 1.0})


def test_evaluate_examples():
    f = PowerSeriesPair(2, 1, {M(1, 0): 1.0})
    assert evaluate(f, [0.3 + 0.1j, 0.9]) == pytest.approx(0.3 + 0.1j)
    g = PowerSeriesPair(2, 1, {}, {M(0, 1): 1.0})
    assert evaluate(g, [0, 0.2j]) == pytest.approx(-0.2j)
    with pytest.raises(DomainError):
        evaluate(f, [0.1])


def test_evaluate_matches_direct_sum(rng):
    f = random_series(rng, 3, 4)
    z = interior_point(rng, 3)
    direct = sum(c * np.prod(z ** np.array(al.exponents)) for al, c in f.a_coeffs.items())
    direct += sum(np.conj(c * np.prod(z ** np.array(al.exponents))) for al, c in f.b_coeffs.items())
    assert evaluate(f, z) == pytest.approx(direct, abs=1e-13)


def test_fm_series_real_on_real_axis():
    xs = np.linspace(-0.9, 0.9, 50)
    for m in (1, 2, 3):
        f = fm_series(m, 40)
        vals = f.evaluate_many(xs[:, None])
        assert np.max(np.abs(vals.imag)) < 1e-14
        assert np.max(np.abs(vals.real - fm_closed_form(xs, m))) < 1e-12


# --- formal differentiation ----------------------------------------------

def test_derivative_examples():
    f = PowerSeriesPair(1, 2, {M(2): 1.0})
    d = partial_derivative(f, M(1))
    assert dict(d.a_coeffs) == {M(1): 2.0}
    assert not partial_derivative(f, M(3)).support()


def test_conjugated_derivative_moves_constant():
    f = PowerSeriesPair(1, 2, {}, {M(1): 2 + 1j, M(2): 1.0})
    d = partial_derivative(f, M(1), conjugated=True)
    # d/dconj(z) conj(g) = conj(g'); g' = (2+i) + 2z
    z = 0.3 - 0.2j
    assert evaluate(d, [z]) == pytest.approx(np.conj((2 + 1j) + 2 * z))


def _wirtinger_fd(F, z, k, conj, h=1e-4):
    e = np.zeros_like(z)
    e[k] = 1
    dx = (F(z + h * e) - F(z - h * e)) / (2 * h)
    dy = (F(z + 1j * h * e) - F(z - 1j * h * e)) / (2 * h)
    return 0.5 * (dx + 1j * dy) if conj else 0.5 * (dx - 1j * dy)


@pytest.mark.parametrize("seed", range(10))
def test_first_order_against_finite_differences(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    f = random_series(rng, n, 5)
    z = interior_point(rng, n)
    F = lambda w: evaluate(f, w)  # noqa: E731
    for k in range(n):
        m = MultiIndex.unit(n, k)
        dz, dzbar = derivative_at(f, m, z)
        assert abs(dz - _wirtinger_fd(F, z, k, False)) < 1e-6
        assert abs(dzbar - _wirtinger_fd(F, z, k, True)) < 1e-6


@pytest.mark.parametrize("seed", range(10))
def test_higher_order_one_step_finite_differences(seed):
    # order m checked as one Wirtinger step of the formal order m - e_k derivative
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(1, 4))
    f = random_series(rng, n, 6)
    z = interior_point(rng, n)
    orders = [a for a in enumerate_up_to(n, 3) if a.degree >= 2]
    for m in orders:
        k = next(i for i, e in enumerate(m) if e)
        lower = m - MultiIndex.unit(n, k)
        for conj in (False, True):
            inner = partial_derivative(f, lower, conjugated=conj)
            fd = _wirtinger_fd(lambda w: evaluate(inner, w), z, k, conj)
            exact = derivative_at(f, m, z)[1 if conj else 0]
            assert abs(exact - fd) < 1e-6 * max(1.0, abs(exact)), (m, conj)


def _gaussian_integer_series(rng, n, cap):
    a = {al: complex(*rng.integers(-9, 10, 2)) for al in enumerate_up_to(n, cap)}
    b = {al: complex(*rng.integers(-9, 10, 2)) for al in enumerate_up_to(n, cap) if al.degree}
    return PowerSeriesPair(n, cap, a, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3))
def test_mixed_derivatives_commute_exactly(seed, n):
    rng = np.random.default_rng(seed)
    f = _gaussian_integer_series(rng, n, 6)
    m1 = MultiIndex(tuple(int(x) for x in rng.integers(0, 3, n)))
    m2 = MultiIndex(tuple(int(x) for x in rng.integers(0, 3, n)))
    for conj in (False, True):
        two_step = partial_derivative(partial_derivative(f, m1, conj), m2, conj)
        one_step = partial_derivative(f, m1 + m2, conj)
        assert two_step == one_step


# --- coefficient extraction ------------------------------------------------

@pytest.mark.parametrize("seed", range(20))
def test_extraction_round_trip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    cap = int(rng.integers(1, 7)) if n < 3 else int(rng.integers(1, 5))
    f = random_series(rng, n, cap)
    got = extract_coefficients(f.evaluate_many, n, 0.7, cap, 4 * cap + 4)
    for alpha in enumerate_up_to(n, cap):
        assert abs(got.a(alpha) - f.a(alpha)) < 1e-10
        assert abs(got.b(alpha) - f.b(alpha)) < 1e-10


def test_extraction_simple_samples():
    const = extract_coefficients(lambda z: np.full(z.shape[0], 2.5 - 1j), 2, 0.5, 3, 8)
    assert const.a(M(0, 0)) == pytest.approx(2.5 - 1j)
    assert all(abs(const.a(al)) < 1e-14 for al in const.support() if al.degree)
    mixed = extract_coefficients(lambda z: z[:, 0] + np.conj(z[:, 1]), 2, 0.5, 2, 6)
    assert mixed.a(M(1, 0)) == pytest.approx(1.0)
    assert mixed.b(M(0, 1)) == pytest.approx(1.0)
    assert abs(mixed.b(M(1, 0))) < 1e-14


def test_extraction_scalar_callable():
    got = extract_coefficients(lambda z: complex(np.asarray(z).ravel()[0] ** 2), 1, 0.6, 3, 8)
    assert got.a(M(2)) == pytest.approx(1.0)


def test_extraction_aliasing_guard():
    with pytest.raises(AliasingError):
        extract_coefficients(lambda z: z[:, 0], 1, 0.5, 4, 8)
    with pytest.raises(DomainError):
        extract_coefficients(lambda z: z[:, 0], 1, 1.0, 1, 8)


# --- sup estimates ---------------------------------------------------------

def test_sup_of_coordinate():
    f = PluriharmonicMap((PowerSeriesPair(2, 1, {M(1, 0): 1.0}),))
    est = sup_norm_estimate(f, budget=10_000)
    assert 1 - 1e-3 <= est <= 1 + 1e-12


def test_sup_of_constant():
    f = PluriharmonicMap((PowerSeriesPair.constant(2, 0.3 - 0.4j),))
    assert sup_norm_estimate(f) == pytest.approx(0.5)


def test_sup_of_product_on_one_ball():
    f = PluriharmonicMap((PowerSeriesPair(2, 2, {M(1, 1): 1.0}),), domain_p=1.0)
    assert sup_norm_estimate(f) == pytest.approx(0.25, rel=1e-3)


@pytest.mark.parametrize("alpha,p", [(M(1, 1), 1.0), (M(2, 1), 2.0), (M(1, 2, 1), 3.0), (M(3), 1.5)])
def test_homogeneous_single_term(alpha, p):
    c = 0.7 - 0.2j
    f = PowerSeriesPair(len(alpha), alpha.degree, {alpha: c})
    expected = abs(c) * sup_monomial_pball(alpha, p)
    got = homogeneous_part_sup(f, alpha.degree, p)
    assert got == pytest.approx(expected, rel=0.02)
    assert got <= expected * (1 + 1e-12)


def test_homogeneous_zero_and_extremal():
    assert homogeneous_part_sup(PowerSeriesPair(2, 2), 1, 2.0) == 0.0
    f = polydisc_extremal(2, 0, 10)
    assert homogeneous_part_sup(f, 1, math.inf) == pytest.approx(2.0, rel=1e-12)


# --- generators --------------------------------------------------------------

@pytest.mark.parametrize("seed", range(5))
def test_generated_map_inside_ball(seed):
    f = random_pluriharmonic(2, 2, 4, 0.7, seed, codomain_p=3.0)
    assert sup_norm_estimate(f, seed=seed + 99) <= 1 / 1.04


def test_generated_real_map_is_real(rng):
    f = random_pluriharmonic(2, 1, 5, 0.8, 3, codomain_real=True)
    pts = np.array([interior_point(rng, 2, 0.99) for _ in range(200)])
    assert np.max(np.abs(f.values(pts).imag)) < 1e-12


def test_zero_decay_gives_constant():
    f = random_pluriharmonic(2, 1, 4, 0.0, 1)
    comp = f.components[0]
    assert all(al.degree == 0 for al in comp.support())


def test_generator_reproducible():
    f1 = random_pluriharmonic(2, 1, 3, 0.6, 11)
    f2 = random_pluriharmonic(2, 1, 3, 0.6, 11)
    assert f1.components == f2.components


@pytest.mark.parametrize("seed", range(5))
def test_re_le_one_class(seed, rng):
    f = random_re_le_one(2, 4, 0.7, seed)
    f0 = evaluate(f, [0, 0])
    assert abs(f0.imag) < 1e-14 and 0 <= f0.real < 1
    pts = np.array([interior_point(rng, 2, 0.999) for _ in range(500)])
    assert np.max(f.evaluate_many(pts).real) <= 1.0


# --- file format -------------------------------------------------------------

def test_file_round_trip_is_exact(rng, tmp_path):
    f = random_series(rng, 3, 3)
    path = tmp_path / "f.phs"
    write_series(f, path)
    assert read_series(path) == f
    buf = io.StringIO()
    write_series(f, buf)
    buf.seek(0)
    assert read_series(buf) == f


def test_file_header_text():
    f = PowerSeriesPair(2, 1, {M(1, 0): 1.5}, {M(0, 1): -2j})
    text = format_series(f)
    assert text.splitlines() == ["PHSERIES n=2 D=1", "A [1,0] 1.5 0", "B [0,1] 0 -2"]


@pytest.mark.parametrize(
    "text,line",
    [
        ("nonsense\n", 1),
        ("PHSERIES n=2 D=1\nA [1,0] 1.0\n", 2),
        ("PHSERIES n=2 D=1\n\nA [1,0] 1 0\nC [0,1] 1 0\n", 4),
        ("PHSERIES n=2 D=1\nA [1,0,0] 1 0\n", 2),
        ("PHSERIES n=2 D=1\nA [2,0] 1 0\n", 2),
        ("PHSERIES n=2 D=1\nA [1,0] x 0\n", 2),
        ("PHSERIES n=2 D=1\nA [1,0] 1 0\nA [1,0] 1 0\n", 3),
        ("PHSERIES n=x D=1\n", 1),
    ],
)
def test_malformed_files_report_line(text, line):
    with pytest.raises(SeriesFormatError) as info:
        parse_series(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)
