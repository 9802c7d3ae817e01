"""Seeded verification campaigns: random trials plus extremal sharpness checks per theorem tag."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from splab import bounds
from splab.bounds import BoundCheckReport, make_report
from splab.errors import ConfigurationError, DomainError
from splab.extremals import fm_series, polydisc_extremal, thm2plus_extremal, thm3plus_extremal
from splab.gradients import check_gradient_exponent
from splab.multiindex import MultiIndex, enumerate_up_to
from splab.poisson import BoundaryDensity, aligned_grid, sign_witness, verify_thm0
from splab.series import lp_norm, random_pluriharmonic, random_re_le_one, sample_sphere

TAGS = ("thm0", "thm2plus", "thm1", "thm3plus", "thm4", "thm2", "coeff-lem31", "coeff-lem0", "lem31ch")

# Per-tag defaults for (n, nu, p, degree).
DEFAULTS = {
    "thm0": (3, 2, 2.0, 0),
    "thm2plus": (2, 2, 2.0, 4),
    "thm1": (2, 2, 2.0, 4),
    "thm3plus": (2, 2, 2.0, 4),
    "thm4": (1, 1, 2.0, 5),
    "thm2": (2, 1, math.inf, 5),
    "coeff-lem31": (2, 1, 2.0, 4),
    "coeff-lem0": (2, 1, 2.0, 4),
    "lem31ch": (2, 1, 2.0, 4),
}

SUP_BUDGET = 2048
SHARPNESS_STREAM = 2**32 - 1  # RNG stream reserved for extremal centers
DIRECTION_BUDGET = 1024


@dataclass(frozen=True)
class CampaignConfig:
    theorem: str
    trials: int = 50
    seed: int = 0
    n: int | None = None
    nu: int | None = None
    p: float | None = None
    degree: int | None = None
    tolerance: float = bounds.DEFAULT_TOLERANCE
    workers: int | None = None

    def __post_init__(self):
        if self.theorem not in TAGS:
            raise ConfigurationError(f"unknown theorem tag {self.theorem!r}; choose from {', '.join(TAGS)}")
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        if not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be positive, got {self.tolerance}")
        n0, nu0, p0, d0 = DEFAULTS[self.theorem]
        object.__setattr__(self, "n", n0 if self.n is None else int(self.n))
        object.__setattr__(self, "nu", nu0 if self.nu is None else int(self.nu))
        object.__setattr__(self, "p", p0 if self.p is None else float(self.p))
        object.__setattr__(self, "degree", d0 if self.degree is None else int(self.degree))
        if self.n < 1 or self.nu < 1 or self.degree < 0:
            raise ConfigurationError("n and nu must be >= 1 and degree >= 0")
        if not self.p >= 1:
            raise DomainError(f"p must lie in [1, inf], got {self.p}")
        if self.theorem in ("thm2plus", "thm1") or (self.theorem == "thm0" and self.nu > 1):
            check_gradient_exponent(self.p)
        if self.theorem == "thm0" and self.n != 3:
            raise ConfigurationError("thm0 is verified on the unit ball of R^3 only (n = 3)")


@dataclass
class CampaignResult:
    reports: list[BoundCheckReport]
    violations: list[BoundCheckReport]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, trial), so trials can run in any order."""
    return np.random.default_rng([seed, trial])


def _ball_point(rng, n: int, p: float, max_radius: float = 0.95) -> np.ndarray:
    direction = sample_sphere(n, p, 1, rng)[0]
    return direction * rng.uniform(0.0, max_radius)


def _tagged(reports, label: str) -> list[BoundCheckReport]:
    return [replace(r, notes=f"{label}; {r.notes}" if r.notes else label) for r in reports]


def _random_order(rng, n: int, cap: int) -> MultiIndex:
    orders = [a for a in enumerate_up_to(n, max(min(cap, 3), 1)) if a.degree >= 1]
    return orders[rng.integers(len(orders))]


# --- trials ---------------------------------------------------------------

def _trial_thm0(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    phis = []
    bound = np.empty(cfg.nu)
    coeffs = []
    for j in range(cfg.nu):
        c = rng.standard_normal()
        b = rng.standard_normal(3)
        A = rng.standard_normal((3, 3))
        A = 0.5 * (A + A.T)
        coeffs.append((c, b, A))
        bound[j] = abs(c) + np.linalg.norm(b) + np.linalg.norm(A, 2)
    scale = rng.uniform(0.5, 0.99) / float(lp_norm(bound, cfg.p))
    for c, b, A in coeffs:
        def value(zeta, c=c, b=b, A=A):
            zeta = np.atleast_2d(zeta)
            return scale * (c + zeta @ b + np.einsum("ij,jk,ik->i", zeta, A, zeta))
        phis.append(BoundaryDensity(value, "random quadratic"))
    x = rng.standard_normal(3)
    x *= rng.uniform(0.0, 0.9) / np.linalg.norm(x)
    return [verify_thm0(phis, x, cfg.p)]


def _trial_gradient(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    real = cfg.theorem == "thm1"
    f = random_pluriharmonic(
        cfg.n, cfg.nu, cfg.degree, rng.uniform(0.3, 0.9), rng,
        domain_p=2.0, codomain_p=cfg.p, codomain_real=real, budget=SUP_BUDGET,
    )
    z = _ball_point(rng, cfg.n, 2.0)
    return [bounds.gradient_check(cfg.theorem, f, z, DIRECTION_BUDGET, int(rng.integers(2**31)))]


def _trial_thm3plus(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    f = random_pluriharmonic(
        cfg.n, cfg.nu, cfg.degree, rng.uniform(0.3, 0.9), rng, domain_p=math.inf, codomain_p=2.0, budget=SUP_BUDGET
    )
    z = _ball_point(rng, cfg.n, math.inf)
    return list(bounds.polydisc_sp_check(f, z))


def _trial_thm4(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    f = random_pluriharmonic(cfg.n, 1, cfg.degree, rng.uniform(0.3, 0.9), rng, domain_p=2.0, budget=SUP_BUDGET)
    z = _ball_point(rng, cfg.n, 2.0, 0.9)
    m = _random_order(rng, cfg.n, cfg.degree)
    return [bounds.thm4_check(f, m, z)]


def _trial_thm2(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    f = random_re_le_one(cfg.n, cfg.degree, rng.uniform(0.3, 0.9), rng, domain_p=math.inf, budget=SUP_BUDGET)
    z = _ball_point(rng, cfg.n, math.inf, 0.9)
    m = _random_order(rng, cfg.n, cfg.degree)
    return [bounds.thm2_check(f, m, z)]


def _trial_lem31(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    f = random_pluriharmonic(cfg.n, 1, cfg.degree, rng.uniform(0.3, 0.9), rng, domain_p=cfg.p, budget=SUP_BUDGET)
    return bounds.coeff_lem31_reports(f, cfg.p)


def _trial_lem0(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    f = random_re_le_one(cfg.n, cfg.degree, rng.uniform(0.3, 0.9), rng, domain_p=cfg.p, budget=SUP_BUDGET)
    return bounds.coeff_lem0_reports(f, cfg.p, budget=SUP_BUDGET, seed=int(rng.integers(2**31)))


def _trial_lem31ch(cfg: CampaignConfig, rng) -> list[BoundCheckReport]:
    f = random_pluriharmonic(cfg.n, 1, cfg.degree, rng.uniform(0.3, 0.9), rng, domain_p=cfg.p, budget=SUP_BUDGET)
    radii = rng.uniform(0.0, 1.0, size=(100, 1)) ** 0.25
    points = sample_sphere(cfg.n, cfg.p, 100, rng) * radii
    return bounds.lem31ch_reports(f, cfg.p, points)


TRIALS: dict[str, Callable] = {
    "thm0": _trial_thm0,
    "thm2plus": _trial_gradient,
    "thm1": _trial_gradient,
    "thm3plus": _trial_thm3plus,
    "thm4": _trial_thm4,
    "thm2": _trial_thm2,
    "coeff-lem31": _trial_lem31,
    "coeff-lem0": _trial_lem0,
    "lem31ch": _trial_lem31ch,
}


# --- sharpness ------------------------------------------------------------

def sharpness_reports(cfg: CampaignConfig) -> list[BoundCheckReport]:
    """Equality witnesses applicable to ``cfg.theorem`` (may be empty)."""
    tag = cfg.theorem
    rng = trial_rng(cfg.seed, SHARPNESS_STREAM)
    out: list[BoundCheckReport] = []
    if tag == "thm0":
        x = np.array([0.0, 0.0, 0.5])
        out = [verify_thm0([sign_witness(x)], x, grid=aligned_grid(0.5))]
    elif tag in ("thm2plus", "thm1"):
        a = _ball_point(rng, cfg.n, 2.0, 0.9)
        f, _ = thm2plus_extremal(a, cfg.nu, cfg.p)
        out = [bounds.gradient_check(tag, f, a, DIRECTION_BUDGET)]
    elif tag == "thm3plus":
        a = _ball_point(rng, cfg.n, math.inf, 0.9)
        out = [bounds.polydisc_sp_check(thm3plus_extremal(a, cfg.nu), a)[0]]
    elif tag == "thm4":
        out = [bounds.thm4_check(fm_series(m, 8), m, [0.0]) for m in (1, 2, 3)]
    elif tag == "thm2":
        f = polydisc_extremal(cfg.n, 0, max(cfg.degree, 3))
        zero = np.zeros(cfg.n)
        out = [bounds.thm2_check(f, MultiIndex.unit(cfg.n, 0, k), zero) for k in (1, 2, 3)]
    elif tag == "coeff-lem31":
        f = fm_series(1, 8)
        alpha = MultiIndex.of(1)
        lhs = abs(f.a(alpha)) + abs(f.b(alpha))
        out = [make_report("coeff-lem31", list(alpha), lhs, bounds.coefficient_bound_lem31(alpha, cfg.p))]
    elif tag == "coeff-lem0":
        f = polydisc_extremal(cfg.n, 0, max(cfg.degree, 1))
        out = [r for r in bounds.coeff_lem0_reports(f, math.inf, SUP_BUDGET, cfg.seed) if r.theorem == "coeff-lem0"][:3]
    return _tagged(out, "sharpness")


def run_campaign(cfg: CampaignConfig) -> CampaignResult:
    """All trials (ordered by trial index) followed by sharpness checks."""
    trial_fn = TRIALS[cfg.theorem]

    def one(trial: int):
        return _tagged(trial_fn(cfg, trial_rng(cfg.seed, trial)), f"trial={trial}")

    workers = cfg.workers or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(one, range(cfg.trials)))
    reports = [r for batch in batches for r in batch]
    reports.extend(sharpness_reports(cfg))
    violations = [r for r in reports if not r.passed(cfg.tolerance)]
    return CampaignResult(reports, violations)


__all__ = ["CampaignConfig", "CampaignResult", "TAGS", "run_campaign", "sharpness_reports", "trial_rng"]
