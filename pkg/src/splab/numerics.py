"""Shared numerical kernels: Gauss-Legendre panels, log-gamma, bisection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from splab.errors import BracketError, DomainError, QuadratureError

DEFAULT_NODES = 64
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout for :func:`gauss_legendre`.

    ``split_points`` mark kinks of the integrand (zeros inside an absolute
    value); each panel between consecutive split points gets its own
    ``node_count``-point rule.
    """

    node_count: int = DEFAULT_NODES
    tolerance: float = DEFAULT_TOL
    split_points: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if int(self.node_count) != self.node_count or self.node_count < 2:
            raise DomainError(f"node_count must be an integer >= 2, got {self.node_count}")
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        pts = tuple(float(s) for s in self.split_points)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("split_points must be strictly increasing")
        object.__setattr__(self, "split_points", pts)

    def with_splits(self, split_points: Sequence[float]) -> "QuadratureSpec":
        return QuadratureSpec(self.node_count, self.tolerance, tuple(sorted(split_points)))


@lru_cache(maxsize=64)
def legendre_rule(node_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(node_count)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _evaluate(f: Callable, t: np.ndarray) -> np.ndarray:
    # Vectorised call first; fall back to pointwise for scalar-only callables.
    try:
        y = np.asarray(f(t), dtype=float)
        if y.shape == t.shape:
            return y
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(ti))) for ti in t])


def _panel_sum(f: Callable, edges: np.ndarray, node_count: int) -> float:
    x, w = legendre_rule(node_count)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    t = (0.5 * (a + b) + half * x[None, :]).ravel()
    y = _evaluate(f, t)
    bad = ~np.isfinite(y)
    if bad.any():
        raise QuadratureError(f"integrand is not finite at node t={t[bad][0]!r}")
    return float(np.sum((half * w[None, :]).ravel() * y))


def _edges(a: float, b: float, spec: QuadratureSpec) -> np.ndarray:
    if not a < b:
        raise DomainError(f"integration interval must satisfy a < b, got [{a}, {b}]")
    for s in spec.split_points:
        if not a < s < b:
            raise DomainError(f"split point {s} is not strictly inside [{a}, {b}]")
    return np.array([a, *spec.split_points, b], dtype=float)


def gauss_legendre(f: Callable, a: float, b: float, spec: QuadratureSpec | None = None) -> float:
    """Integrate ``f`` over ``[a, b]`` panel by panel.

    Each subinterval between consecutive ``spec.split_points`` is integrated
    with a ``spec.node_count``-point Gauss-Legendre rule. ``f`` may be
    vectorised (array in, array out) or scalar-only.

    Raises
    ------
    QuadratureError
        If ``f`` is not finite at some node.
    """
    spec = spec or QuadratureSpec()
    return _panel_sum(f, _edges(a, b, spec), spec.node_count)


def adaptive_gauss_legendre(
    f: Callable, a: float, b: float, spec: QuadratureSpec | None = None, max_levels: int = 12
) -> float:
    """Like :func:`gauss_legendre`, but halves every panel until two successive
    estimates agree to ``spec.tolerance`` (relative to ``max(1, |I|)``)."""
    spec = spec or QuadratureSpec()
    edges = _edges(a, b, spec)
    coarse = _panel_sum(f, edges, spec.node_count)
    for _ in range(max_levels):
        mid = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mid]))
        fine = _panel_sum(f, edges, spec.node_count)
        if abs(fine - coarse) <= spec.tolerance * max(1.0, abs(fine)):
            return fine
        coarse = fine
    return coarse


def abs_cos_integral(m: int, gamma: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``|cos(m*theta + gamma)|`` over ``[0, 2*pi]``.

    The interval is split at every interior zero of the cosine, so each panel
    carries a smooth integrand.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    spec = spec or QuadratureSpec()
    two_pi = 2.0 * math.pi
    k = np.arange(-2 * m - 2, 2 * m + 3)
    zeros = (0.5 * math.pi + k * math.pi - gamma) / m
    margin = 1e-12 * two_pi
    zeros = np.unique(zeros[(zeros > margin) & (zeros < two_pi - margin)])
    integrand = lambda t: np.abs(np.cos(m * t + gamma))  # noqa: E731
    return gauss_legendre(integrand, 0.0, two_pi, spec.with_splits(zeros))


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def log_factorial(k: int) -> float:
    return math.lgamma(k + 1.0)


def log_binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of ``f`` in ``[lo, hi]`` to bracket width ``tol``.

    Raises
    ------
    BracketError
        If ``f(lo)`` and ``f(hi)`` do not differ in sign.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return float(lo)
    if fhi == 0:
        return float(hi)
    if not flo * fhi < 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    return float(optimize.bisect(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))
