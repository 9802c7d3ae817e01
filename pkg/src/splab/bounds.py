"""Right-hand sides of the Schwarz-Pick type bounds and the check harness.

Every check produces a :class:`BoundCheckReport` with ``margin = rhs - lhs``
and ``ratio = lhs / rhs``; a check passes when ``margin >= -tolerance``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from splab.errors import ConfigurationError, DomainError
from splab.gradients import check_gradient_exponent, directional_sup
from splab.multiindex import MultiIndex, as_multiindex, log_power_ratio
from splab.numerics import QuadratureSpec, adaptive_gauss_legendre, log_binomial, log_gamma
from splab.series import (
    HarmonicMapBase,
    PowerSeriesPair,
    homogeneous_part_sup,
    lp_norm,
    partial_derivative,
    evaluate,
)

FOUR_OVER_PI = 4.0 / math.pi
SIXTEEN_OVER_PI2 = 16.0 / math.pi**2
DEFAULT_TOLERANCE = 1e-8


def _jsonable_point(point) -> list:
    arr = np.asarray(point)
    if np.iscomplexobj(arr):
        if np.all(arr.imag == 0):
            return [float(v) for v in arr.real.ravel()]
        return [[float(v.real), float(v.imag)] for v in arr.ravel()]
    if arr.dtype.kind in "iu":
        return [int(v) for v in arr.ravel()]
    return [float(v) for v in arr.ravel()]


@dataclass(frozen=True)
class BoundCheckReport:
    theorem: str
    point: list
    lhs: float
    rhs: float
    margin: float
    ratio: float
    notes: str = ""

    def passed(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.margin >= -tolerance

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def make_report(theorem: str, point, lhs: float, rhs: float, notes: str = "") -> BoundCheckReport:
    lhs, rhs = float(lhs), float(rhs)
    if rhs > 0:
        ratio = lhs / rhs
    else:
        ratio = 0.0 if lhs == 0 else math.inf
    return BoundCheckReport(theorem, _jsonable_point(point), lhs, rhs, rhs - lhs, ratio, notes)


# --- constants ------------------------------------------------------------

def c_n_constant(n: int) -> float:
    """``c_n = 2 Gamma((n+2)/2) / (Gamma(1/2) Gamma((n-1)/2))``."""
    if n < 3:
        raise DomainError(f"c_n requires n >= 3, got n={n}")
    return 2.0 * math.exp(log_gamma(0.5 * (n + 2)) - log_gamma(0.5) - log_gamma(0.5 * (n - 1)))


def khavinson_integrand(n: int, r: float):
    k = (n - 2) / n * r

    def integrand(theta):
        c = np.cos(theta)
        return np.abs(c - k) * np.sin(theta) ** (n - 2) / (1.0 - 2.0 * r * c + r * r) ** (0.5 * (n - 2))

    return integrand


def khavinson_constant(n: int, r: float) -> float:
    """Sharp constant ``C(x)`` of ``|grad u(x)| <= C(x) sup|u|`` at ``|x| = r`` in R^n.

    ``c_n/(1-r^2) int_0^pi |cos t - (n-2) r / n| sin^(n-2) t / (1 - 2 r cos t + r^2)^((n-2)/2) dt``,
    integrated with a Gauss-Legendre split at the kink ``t0 = arccos((n-2) r / n)``.
    """
    if n < 3:
        raise DomainError(f"khavinson_constant requires n >= 3, got n={n}")
    r = float(r)
    if not 0 <= r < 1:
        raise DomainError(f"khavinson_constant requires 0 <= r < 1, got r={r}")
    theta0 = math.acos((n - 2) / n * r)
    spec = QuadratureSpec(node_count=64, tolerance=1e-14, split_points=(theta0,))
    integral = adaptive_gauss_legendre(khavinson_integrand(n, r), 0.0, math.pi, spec)
    return c_n_constant(n) / (1.0 - r * r) * integral


def colonna_rhs(r: float) -> float:
    """``(4/pi) / (1 - r^2)``."""
    r = float(r)
    if not 0 <= r < 1:
        raise DomainError(f"need 0 <= r < 1, got r={r}")
    return FOUR_OVER_PI / (1.0 - r * r)


def kalaj_vuorinen_rhs(r: float, s: float) -> float:
    """``(4/pi) (1 - s^2) / (1 - r^2)`` with ``s = ||u(z)||_p``."""
    r, s = float(r), float(s)
    if not 0 <= r < 1:
        raise DomainError(f"need 0 <= r < 1, got r={r}")
    if not 0 <= s <= 1:
        raise DomainError(f"need 0 <= s <= 1, got s={s}")
    return FOUR_OVER_PI * (1.0 - s * s) / (1.0 - r * r)


def _assemble(log_value: float, direct) -> float:
    # Direct float arithmetic where it cannot overflow, log space otherwise.
    if log_value < 700:
        return float(direct())
    return math.exp(log_value)


def higher_order_rhs_ball(n: int, m, z) -> float:
    """Bound on ``|d^m f/dz^m| + |d^m f/dconj(z)^m|`` for ``f`` from the Euclidean ball into the disc.

    ``n = 1``: ``(4/pi) m! (1+|z|)^(m-1) / (1-|z|^2)^m``.
    ``n >= 2``: ``(4/pi) n^(|m|/2) C(n+|m|-1, n-1) |m|! prod (1+|z_j|)^(m_j) / (1-||z||^2)^|m|``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.shape != (n,):
        raise DomainError(f"z must have {n} coordinates, got shape {z.shape}")
    m = as_multiindex(m, n)
    if len(m) != n:
        raise DomainError(f"m must have length {n}")
    d = m.degree
    if d < 1:
        raise DomainError("need |m| >= 1")
    r2 = float(np.sum(np.abs(z) ** 2))
    if not r2 < 1:
        raise DomainError(f"z must lie in the open unit ball, ||z||_2 = {math.sqrt(r2)}")
    if n == 1:
        r = abs(z[0])
        log_value = math.log(FOUR_OVER_PI) + math.lgamma(d + 1) + (d - 1) * math.log1p(r) - d * math.log1p(-r2)
        return _assemble(
            log_value, lambda: FOUR_OVER_PI * math.factorial(d) * (1.0 + r) ** (d - 1) / (1.0 - r * r) ** d
        )
    mods = np.abs(z)
    log_prod = float(sum(mk * math.log1p(float(a)) for mk, a in zip(m, mods)))
    log_value = (
        math.log(FOUR_OVER_PI)
        + 0.5 * d * math.log(n)
        + log_binomial(n + d - 1, n - 1)
        + math.lgamma(d + 1)
        + log_prod
        - d * math.log1p(-r2)
    )
    return _assemble(
        log_value,
        lambda: FOUR_OVER_PI
        * n ** (0.5 * d)
        * math.comb(n + d - 1, n - 1)
        * math.factorial(d)
        * math.prod((1.0 + float(a)) ** mk for mk, a in zip(m, mods))
        / (1.0 - r2) ** d,
    )


def higher_order_rhs_polydisc(m, z, re_f_z: float) -> float:
    """``2 m! (1 - Re f(z)) (1 + ||z||_inf)^(|m|-N) / (1 - ||z||_inf^2)^|m|``, N = #nonzero ``m_j``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m = as_multiindex(m, z.shape[0])
    if len(m) != z.shape[0]:
        raise DomainError(f"m must have length {z.shape[0]}")
    if m.degree < 1:
        raise DomainError("need |m| >= 1")
    r = float(np.max(np.abs(z)))
    if not r < 1:
        raise DomainError(f"need ||z||_inf < 1, got {r}")
    re_f_z = float(re_f_z)
    if re_f_z > 1:
        raise DomainError(f"need Re f(z) <= 1, got {re_f_z}")
    if re_f_z == 1:
        return 0.0
    d, big_n = m.degree, m.nonzero_count
    log_value = (
        math.log(2.0) + m.log_factorial() + math.log(1.0 - re_f_z) + (d - big_n) * math.log1p(r) - d * math.log1p(-r * r)
    )
    return _assemble(
        log_value, lambda: 2.0 * m.factorial() * (1.0 - re_f_z) * (1.0 + r) ** (d - big_n) / (1.0 - r * r) ** d
    )


# --- pointwise checks ------------------------------------------------------

def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigurationError(message)


def polydisc_sp_check(f: HarmonicMapBase, z) -> tuple[BoundCheckReport, BoundCheckReport]:
    """Polydisc Schwarz-Pick sums for ``f`` from the polydisc into the Euclidean ball.

    Returns the weighted form (weights ``(1-|z_k|^2)^2``, right side
    ``1 - ||f(z)||^2``) and the weaker form with ``(1 - ||z||_inf^2)^2``.
    """
    _require(math.isinf(f.domain_p), "polydisc check needs a map on the polydisc (domain_p = inf)")
    _require(f.codomain_p == 2, "polydisc check needs the Euclidean ball as target (codomain_p = 2)")
    z = np.asarray(z, dtype=complex)
    rz = float(np.max(np.abs(z)))
    if not rz < 1:
        raise DomainError(f"need ||z||_inf < 1, got {rz}")
    J, K = f.jacobians(z)
    energy = np.abs(J) ** 2 + np.abs(K) ** 2  # (nu, n)
    weights = (1.0 - np.abs(z) ** 2) ** 2
    fz = f.value(z)
    slack = 1.0 - float(np.sum(np.abs(fz) ** 2))
    strong = make_report("thm3plus", z, float(np.sum(energy * weights[None, :])), slack)
    weak = make_report("thm3plus-weak", z, float(np.sum(energy)), slack / (1.0 - rz * rz) ** 2)
    return strong, weak


def _series_of(f) -> PowerSeriesPair:
    if isinstance(f, PowerSeriesPair):
        return f
    comps = getattr(f, "components", None)
    if comps is not None and len(comps) == 1:
        return comps[0]
    raise ConfigurationError("this check needs a scalar power series (PowerSeriesPair or one-component map)")


def derivative_pair(f: PowerSeriesPair, m: MultiIndex, z) -> tuple[complex, complex]:
    """``(d^m h(z), d^m g(z))`` from formal differentiation."""
    dh = partial_derivative(f, m, conjugated=False)
    dgbar = partial_derivative(f, m, conjugated=True)
    # d^m f/dconj(z)^m = conj(d^m g); evaluate returns exactly that quantity.
    return evaluate(dh, z), complex(np.conj(evaluate(dgbar, z)))


def thm4_check(f, m, z) -> BoundCheckReport:
    """``|d^m f/dz^m (z)| + |d^m f/dconj(z)^m (z)|`` against :func:`higher_order_rhs_ball`."""
    f = _series_of(f)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m = as_multiindex(m, f.dimension)
    dh, dg = derivative_pair(f, m, z)
    notes = f"m={m}"
    if m.degree > f.degree_cap:
        notes += "; order exceeds truncation degree"
    return make_report("thm4", z, abs(dh) + abs(dg), higher_order_rhs_ball(f.dimension, m, z), notes)


def thm2_check(f, m, z) -> BoundCheckReport:
    """``|d^m f/dz^m + conj(d^m f/dconj(z)^m)|`` against :func:`higher_order_rhs_polydisc`."""
    f = _series_of(f)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    m = as_multiindex(m, f.dimension)
    dh, dg = derivative_pair(f, m, z)
    re_f = evaluate(f, z).real
    return make_report("thm2", z, abs(dh + dg), higher_order_rhs_polydisc(m, z, re_f), f"m={m}")


def gradient_check(tag: str, f: HarmonicMapBase, z, budget: int = 4096, seed: int = 0) -> BoundCheckReport:
    """``directional_sup`` against the Colonna-type (``thm2plus``) or value-dependent (``thm1``) bound."""
    _require(f.domain_p == 2, f"{tag} needs a map on the Euclidean ball (domain_p = 2)")
    check_gradient_exponent(f.codomain_p)
    z = np.asarray(z, dtype=complex)
    r = float(np.linalg.norm(z))
    lhs = directional_sup(f, z, budget=budget, seed=seed)
    if tag == "thm2plus":
        return make_report(tag, z, lhs, colonna_rhs(r))
    if tag == "thm1":
        _require(f.codomain_real, "thm1 needs a map into the real ball (codomain_real = True)")
        s = float(lp_norm(f.value(z).real, f.codomain_p))
        return make_report(tag, z, lhs, kalaj_vuorinen_rhs(r, min(s, 1.0)), f"||u(z)||_p={s:.6g}")
    raise ConfigurationError(f"unknown gradient theorem tag {tag!r}")


def run_check(theorem_tag: str, f, z, options: dict | None = None) -> BoundCheckReport:
    """Dispatch one pointwise check.

    Tags: ``thm2plus``, ``thm1`` (gradient of the norm), ``thm3plus``,
    ``thm3plus-weak`` (polydisc sums), ``thm4``, ``thm2`` (higher derivatives,
    need ``options["m"]``).
    """
    options = dict(options or {})
    if theorem_tag in ("thm2plus", "thm1"):
        return gradient_check(theorem_tag, f, z, options.get("budget", 4096), options.get("seed", 0))
    if theorem_tag in ("thm3plus", "thm3plus-weak"):
        strong, weak = polydisc_sp_check(f, z)
        return strong if theorem_tag == "thm3plus" else weak
    if theorem_tag in ("thm4", "thm2"):
        if "m" not in options:
            raise ConfigurationError(f"{theorem_tag} needs the derivative order options['m']")
        return (thm4_check if theorem_tag == "thm4" else thm2_check)(f, options["m"], z)
    raise ConfigurationError(f"unknown theorem tag {theorem_tag!r}")


# --- coefficient checks ----------------------------------------------------

def _p_root(alpha: MultiIndex, p: float) -> float:
    if math.isinf(p):
        return 1.0
    return math.exp(log_power_ratio(alpha) / p)


def coefficient_bound_lem31(alpha: MultiIndex, p: float) -> float:
    """``(4/pi) (|alpha|^|alpha| / alpha^alpha)^(1/p)``."""
    return FOUR_OVER_PI * _p_root(alpha, p)


def coefficient_bound_lem0(alpha: MultiIndex, p: float, re_f0: float) -> float:
    """``2 (|alpha|^|alpha| / alpha^alpha)^(1/p) (1 - Re f(0))``."""
    return 2.0 * _p_root(alpha, p) * (1.0 - re_f0)


def coeff_lem31_reports(f, p: float) -> list[BoundCheckReport]:
    """``|a_alpha| + |b_alpha|`` for every stored ``|alpha| >= 1`` of ``f`` into the disc."""
    f = _series_of(f)
    out = []
    for alpha in f.support():
        if alpha.degree == 0:
            continue
        lhs = abs(f.a(alpha)) + abs(f.b(alpha))
        out.append(make_report("coeff-lem31", list(alpha), lhs, coefficient_bound_lem31(alpha, p)))
    return out


def coeff_lem0_reports(f, p: float, budget: int = 2048, seed: int = 0) -> list[BoundCheckReport]:
    """Coefficient and homogeneous-part bounds for ``Re f <= 1`` on the ``l_p`` ball."""
    f = _series_of(f)
    re_f0 = f.a(MultiIndex.zero(f.dimension)).real
    out = []
    degrees = set()
    for alpha in f.support():
        if alpha.degree == 0:
            continue
        degrees.add(alpha.degree)
        lhs = abs(f.a(alpha) + f.b(alpha))
        out.append(make_report("coeff-lem0", list(alpha), lhs, coefficient_bound_lem0(alpha, p, re_f0)))
    for k in sorted(degrees):
        lhs = homogeneous_part_sup(f, k, p, budget, seed)
        out.append(make_report("coeff-lem0-homogeneous", [k], lhs, 2.0 * (1.0 - re_f0), f"k={k}"))
    return out


def lem31ch_reports(f, p: float, points: np.ndarray) -> list[BoundCheckReport]:
    """``sum_{|alpha|=k} (|a|^2 + |b|^2) |z^alpha|^2 <= 16/pi^2``, worst sampled point per degree ``k``."""
    f = _series_of(f)
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    by_degree: dict[int, list[MultiIndex]] = {}
    for alpha in f.support():
        if alpha.degree:
            by_degree.setdefault(alpha.degree, []).append(alpha)
    out = []
    mods = np.abs(points)
    for k, alphas in sorted(by_degree.items()):
        weights = np.array([abs(f.a(al)) ** 2 + abs(f.b(al)) ** 2 for al in alphas])
        exps = np.array([al.exponents for al in alphas])
        mono = np.prod(mods[:, None, :] ** (2 * exps[None, :, :]), axis=-1)  # (P, M)
        vals = mono @ weights
        i = int(np.argmax(vals))
        out.append(make_report("lem31ch", points[i], float(vals[i]), SIXTEEN_OVER_PI2, f"k={k}"))
    return out


__all__ = [
    "BoundCheckReport",
    "DEFAULT_TOLERANCE",
    "c_n_constant",
    "coeff_lem0_reports",
    "coeff_lem31_reports",
    "coefficient_bound_lem0",
    "coefficient_bound_lem31",
    "colonna_rhs",
    "derivative_pair",
    "gradient_check",
    "higher_order_rhs_ball",
    "higher_order_rhs_polydisc",
    "kalaj_vuorinen_rhs",
    "khavinson_constant",
    "lem31ch_reports",
    "make_report",
    "polydisc_sp_check",
    "run_check",
    "thm2_check",
    "thm4_check",
]
