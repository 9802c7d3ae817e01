"""Bohr-radius functionals, per-function Bohr radii and the class bound formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from splab import kernels
from splab.errors import DomainError
from splab.numerics import bisect, log_factorial
from splab.series import PowerSeriesPair

RADIUS_CAP_EPS = 1e-9
X0_BRACKET = (0.01, 0.36)
TERM_CUTOFF = 1e-14
TAIL_CUTOFF = 1e-12


@dataclass(frozen=True)
class BohrResult:
    radius: float
    functional_tag: str
    bracket: tuple[float, float]
    evaluations: int
    notes: str = ""


def _majorant_terms(f: PowerSeriesPair, tag: str) -> tuple[np.ndarray, np.ndarray]:
    exps, coeffs = [], []
    for alpha in f.support():
        if tag == "abs-pair":
            if alpha.degree == 0:
                continue
            c = abs(f.a(alpha)) + abs(f.b(alpha))
        elif tag == "sum":
            c = abs(f.a(alpha) + f.b(alpha))
        else:
            raise DomainError(f"unknown majorant {tag!r}; use 'abs-pair' or 'sum'")
        if c > 0:
            exps.append(alpha.exponents)
            coeffs.append(c)
    n = f.dimension
    return np.array(exps, dtype=np.int64).reshape(-1, n), np.array(coeffs, dtype=float)


def _positive_sphere_max(
    exps: np.ndarray, coeffs: np.ndarray, n: int, rho: float, p: float, budget: int, seed: int
) -> float:
    """Max of ``sum c_alpha x^alpha`` over ``x >= 0`` with ``||x||_p = rho`` (multi-start)."""
    if coeffs.size == 0:
        return 0.0
    if rho == 0:
        zero_mask = exps.sum(axis=1) == 0
        return float(coeffs[zero_mask].sum())

    def values(x):
        return kernels.monomials(np.ascontiguousarray(x, dtype=float), exps) @ coeffs

    if math.isinf(p) or n == 1:
        return float(values(np.full((1, n), rho))[0])

    def project(y):
        y = np.abs(y)
        norm = np.sum(y**p, axis=-1, keepdims=True) ** (1.0 / p)
        return rho * y / np.where(norm > 0, norm, 1.0)

    rng = np.random.default_rng(seed)
    starts = np.vstack([np.eye(n), np.ones((1, n)), rng.dirichlet(np.ones(n), size=max(budget, 1))])
    starts = project(starts)
    vals = values(starts)
    best = float(vals.max())

    def neg(t):
        x = project(t[None, :])
        return -float(values(x)[0])

    for idx in np.argsort(vals)[::-1][:4]:
        res = optimize.minimize(neg, starts[idx], method="Nelder-Mead",
                                options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return best


def majorant_abs_pair(f: PowerSeriesPair, rho: float, p: float, budget: int = 256, seed: int = 0) -> float:
    """``sup_{||z||_p <= rho} sum_{|alpha|>=1} (|a_alpha| + |b_alpha|) |z^alpha|``.

    The coefficients are nonnegative, so the supremum sits at a nonnegative
    real point of the sphere ``||x||_p = rho``; for ``p = inf`` it is ``(rho, ..., rho)``.
    """
    _check_rho(rho)
    exps, coeffs = _majorant_terms(f, "abs-pair")
    return _positive_sphere_max(exps, coeffs, f.dimension, rho, p, budget, seed)


def majorant_sum_with_constant(f: PowerSeriesPair, rho: float, p: float, budget: int = 256, seed: int = 0) -> float:
    """``sup_{||z||_p <= rho} sum_alpha |a_alpha + b_alpha| |z^alpha|``, constant term included."""
    _check_rho(rho)
    exps, coeffs = _majorant_terms(f, "sum")
    return _positive_sphere_max(exps, coeffs, f.dimension, rho, p, budget, seed)


def _check_rho(rho: float) -> None:
    if not 0 <= rho < 1:
        raise DomainError(f"need 0 <= rho < 1, got {rho}")


MAJORANTS = {"abs-pair": majorant_abs_pair, "sum": majorant_sum_with_constant}


def bohr_radius_of(
    f: PowerSeriesPair,
    functional_tag: str = "sum",
    p: float = math.inf,
    tol: float = 1e-10,
    tail_bound: Callable[[float], float] | None = None,
    budget: int = 256,
    seed: int = 0,
) -> BohrResult:
    """Largest ``rho`` with ``functional(rho) (+ tail_bound(rho)) <= 1``, by bisection.

    ``tail_bound`` adds a rigorous bound on the truncated part of the series.
    The radius is capped at ``1 - 1e-9`` when the functional never exceeds 1.
    """
    if functional_tag not in MAJORANTS:
        raise DomainError(f"unknown majorant {functional_tag!r}; use 'abs-pair' or 'sum'")
    functional = MAJORANTS[functional_tag]
    count = 0

    def excess(rho):
        nonlocal count
        count += 1
        val = functional(f, rho, p, budget, seed)
        if tail_bound is not None:
            val += tail_bound(rho)
        return val - 1.0

    hi = 1.0 - RADIUS_CAP_EPS
    at_zero = excess(0.0)
    if at_zero > 0:
        return BohrResult(0.0, functional_tag, (0.0, 0.0), count, "functional exceeds 1 already at rho = 0")
    at_cap = excess(hi)
    if at_cap <= 0:
        return BohrResult(hi, functional_tag, (hi, hi), count, "functional never exceeds 1; radius capped")
    if at_zero == 0:
        return BohrResult(0.0, functional_tag, (0.0, 0.0), count, "functional equals 1 at rho = 0")
    root = bisect(excess, 0.0, hi, tol)
    lo = max(root - tol, 0.0)
    return BohrResult(root, functional_tag, (lo, min(root + tol, hi)), count)


@dataclass(frozen=True)
class ClassBohrCertificate:
    radius: float
    grid: tuple[tuple[float, float], ...]
    witness: BohrResult | None = None
    notes: str = field(default="f(0) + 2(1 - f(0)) rho/(1 - rho) at rho = 1/3 for each grid value of f(0)")


def class_bohr_identity(f0: float, rho: float) -> float:
    """``f(0) + 2 (1 - f(0)) rho / (1 - rho)``, the extremal majorant of the ``Re f <= 1`` class."""
    return f0 + 2.0 * (1.0 - f0) * rho / (1.0 - rho)


def class_bohr_1d(with_witness: bool = True) -> ClassBohrCertificate:
    """The one-variable class radius ``1/3`` with its certificate.

    The identity ``f(0) + 2(1-f(0)) rho/(1-rho) = 1`` holds at ``rho = 1/3`` for
    every ``f(0)`` in ``[0, 1)``; the witness is the Bohr radius of
    ``-2 sum z^j`` (200 terms plus a geometric tail bound).
    """
    from splab.extremals import polydisc_extremal

    rho = 1.0 / 3.0
    grid = tuple((f0, class_bohr_identity(f0, rho)) for f0 in (k / 10 for k in range(10)))
    witness = None
    if with_witness:
        cap = 200
        f = polydisc_extremal(1, 0, cap)
        witness = bohr_radius_of(
            f, "sum", math.inf, tol=1e-12, tail_bound=lambda r: 2.0 * r ** (cap + 1) / (1.0 - r)
        )
    return ClassBohrCertificate(rho, grid, witness)


# --- the root equation sum k^k/k! x^k = pi/4 -------------------------------

def series_S(x: float) -> float:
    """``S(x) = sum_{k>=1} k^k / k! x^k`` for ``0 <= x < 1/e``.

    Terms are formed in log space. Consecutive terms shrink by at least the
    factor ``e x``, so ``t_K e x / (1 - e x)`` bounds the tail after term ``K``.
    """
    x = float(x)
    if not 0 <= x < 1.0 / math.e:
        raise DomainError(f"S(x) converges only for 0 <= x < 1/e, got x={x}")
    if x == 0:
        return 0.0
    ratio = math.e * x
    log_x = math.log(x)
    total = 0.0
    k = 0
    while True:
        k += 1
        term = math.exp(k * math.log(k) - log_factorial(k) + k * log_x)
        total += term
        if term < TERM_CUTOFF and term * ratio / (1.0 - ratio) < TAIL_CUTOFF:
            return total
        if k > 1_000_000:
            raise DomainError(f"S(x) did not converge at x={x}")


def solve_x0(tol: float = 1e-14) -> float:
    """Root ``x_0`` of ``S(x) = pi/4`` on ``(0.01, 0.36)``."""
    return bisect(lambda x: series_S(x) - math.pi / 4.0, *X0_BRACKET, tol=tol)


def lower_bound_radius(n: int, p: float) -> float:
    """Class lower bound: ``pi / ((pi + 4 sqrt 2) sqrt n)`` for ``p >= 2``, ``x_0 / n^(1 - 1/p)`` for ``p < 2``."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    if not p >= 1:
        raise DomainError(f"need p >= 1, got {p}")
    if p >= 2:
        return math.pi / ((math.pi + 4.0 * math.sqrt(2.0)) * math.sqrt(n))
    return solve_x0() / n ** (1.0 - 1.0 / p)


def upper_bound_terms(n: int, p: float) -> list[tuple[int, float]]:
    """``(k, (k!^(1/k)/n)^(1-1/min(p,2)) (32 k n log 6k)^(1/(2k)))`` over ``k in [2, max(2, ceil(3 log n))]``."""
    if n < 2:
        raise DomainError(f"upper bound needs n >= 2, got {n}")
    if not p >= 1:
        raise DomainError(f"need p >= 1, got {p}")
    expo = 1.0 - 1.0 / min(p, 2.0)
    top = max(2, math.ceil(3.0 * math.log(n)))
    out = []
    for k in range(2, top + 1):
        log_val = expo * (log_factorial(k) / k - math.log(n)) + math.log(32.0 * k * n * math.log(6.0 * k)) / (2.0 * k)
        out.append((k, math.exp(log_val)))
    return out


def upper_bound_radius(n: int, p: float) -> float:
    """Minimum of :func:`upper_bound_terms` over the ``k`` window."""
    return min(v for _, v in upper_bound_terms(n, p))


__all__ = [
    "BohrResult",
    "ClassBohrCertificate",
    "bohr_radius_of",
    "class_bohr_1d",
    "class_bohr_identity",
    "lower_bound_radius",
    "majorant_abs_pair",
    "majorant_sum_with_constant",
    "series_S",
    "solve_x0",
    "upper_bound_radius",
    "upper_bound_terms",
]
