"""Gradient of the norm ``|grad ||f(z)||_p|`` for (pluri)harmonic maps.

Two routes are provided. :func:`grad_norm_1d` uses the closed Wirtinger
form through the dual vector; :func:`directional_sup` maximises one-sided
directional derivatives over real unit directions. For a map with
``J = df/dz`` and ``K = df/dconj(z)`` the derivative of ``z -> f(z)`` along a
complex unit vector ``v`` is ``J v + K conj(v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.stats import qmc, norm as normal_dist

from splab.errors import DegenerateDualError, DomainError
from splab.series import HarmonicMapBase, lp_norm

NONSMOOTH_THRESHOLD = 1e-12
ANGULAR_GRID = 4096
RANDOM_DIRECTIONS = 32


def conjugate_exponent(p: float) -> float:
    if math.isinf(p):
        return 1.0
    if p == 1:
        return math.inf
    return p / (p - 1.0)


def check_gradient_exponent(p: float) -> float:
    p = float(p)
    if not (1 < p < math.inf):
        raise DomainError(f"gradient functionals need p in (1, inf), got p={p}")
    return p


@dataclass(frozen=True)
class DualVector:
    """Unit vector of ``l_q`` that realises ``||w||_p`` as ``Re sum w_k conj(entries_k)``."""

    entries: np.ndarray
    q: float

    def pairing(self, w) -> float:
        return float(np.real(np.sum(np.asarray(w) * np.conj(self.entries))))

    def norm(self) -> float:
        return float(lp_norm(self.entries, self.q))


def dual_vector(w, p: float) -> DualVector:
    """``entries_k = |w_k|^(p-2) w_k / ||w||_p^(p-1)`` (zero where ``w_k = 0``).

    Raises
    ------
    DegenerateDualError
        If ``w`` is the zero vector.
    """
    p = check_gradient_exponent(p)
    w = np.atleast_1d(np.asarray(w))
    norm_w = float(lp_norm(w, p))
    if norm_w == 0:
        raise DegenerateDualError("dual vector of the zero vector is undefined")
    mod = np.abs(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        weight = np.where(mod > 0, mod ** (p - 2.0), 0.0)
    entries = weight * w / norm_w ** (p - 1.0)
    return DualVector(entries, conjugate_exponent(p))


def _interior(f: HarmonicMapBase, z: np.ndarray) -> None:
    r = float(lp_norm(z, f.domain_p))
    if not r < 1:
        raise DomainError(f"point has ||z||_{f.domain_p:g} = {r} >= 1; it must lie in the open domain ball")


def smooth_gradient_vector(J: np.ndarray, K: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    """Complex vector ``c`` with ``d||f||_p(v) = Re(c . v)`` for unit complex directions ``v``."""
    xi = dual_vector(w, p).entries
    c1 = np.conj(xi) @ J
    c2 = np.conj(xi) @ K
    return c1 + np.conj(c2)


def grad_norm_1d(f: HarmonicMapBase, z: complex, p: float | None = None) -> float:
    """``|d||f||_p/dz| + |d||f||_p/dconj(z)|`` for a map of one complex variable.

    Where ``f(z) != 0`` the Wirtinger derivatives of the norm come from the
    dual vector ``xi``::

        d||f||/dz = (<df/dz, xi> + conj<df/dconj(z), xi>) / 2

    Where ``f(z) = 0`` the norm is not differentiable and the value is the
    maximum over a 4096-point angular grid of ``||e^{ia} f_z + e^{-ia} f_zbar||_p``.
    """
    p = check_gradient_exponent(p if p is not None else f.codomain_p)
    if f.dimension != 1:
        raise DomainError(f"grad_norm_1d needs a map of one variable, got n={f.dimension}")
    z = complex(z)
    if not abs(z) < 1:
        raise DomainError(f"|z| = {abs(z)} must be < 1")
    pt = np.array([z])
    J, K = f.jacobians(pt)
    w = f.value(pt)
    if lp_norm(w, p) < NONSMOOTH_THRESHOLD:
        angles = 2.0 * np.pi * np.arange(ANGULAR_GRID) / ANGULAR_GRID
        rot = np.exp(1j * angles)[:, None]
        combos = rot * J[:, 0][None, :] + np.conj(rot) * K[:, 0][None, :]
        return float(np.max(lp_norm(combos, p, axis=-1)))
    xi = dual_vector(w, p).entries
    dz = 0.5 * (np.vdot(xi, J[:, 0]) + np.conj(np.vdot(xi, K[:, 0])))
    dzbar = 0.5 * (np.vdot(xi, K[:, 0]) + np.conj(np.vdot(xi, J[:, 0])))
    return float(abs(dz) + abs(dzbar))


def gradient_norm_exact(f: HarmonicMapBase, z, p: float | None = None) -> float:
    """Closed form ``||conj(xi) J + conj(conj(xi) K)||_2`` on the smooth branch."""
    p = check_gradient_exponent(p if p is not None else f.codomain_p)
    z = np.asarray(z, dtype=complex)
    J, K = f.jacobians(z)
    w = f.value(z)
    if lp_norm(w, p) < NONSMOOTH_THRESHOLD:
        raise DegenerateDualError("f(z) = 0: the closed form does not apply")
    return float(np.linalg.norm(smooth_gradient_vector(J, K, w, p)))


def sphere_directions(n: int, budget: int, seed: int = 0) -> np.ndarray:
    """Unit complex directions (P, n): Sobol points mapped to the real ``2n-1``
    sphere, the ``2n`` real/imaginary coordinate directions and 32 random ones."""
    dim = 2 * n
    m = max(int(math.ceil(math.log2(max(budget, 2)))), 1)
    sob = qmc.Sobol(d=dim, scramble=False).random_base2(m)[1:]
    sob = np.clip(sob, 1e-12, 1 - 1e-12)
    gauss = normal_dist.ppf(sob)
    rng = np.random.default_rng(seed)
    extra = rng.standard_normal((RANDOM_DIRECTIONS, dim))
    coords = np.vstack([np.eye(dim), -np.eye(dim)])
    x = np.vstack([coords, gauss, extra])
    lengths = np.linalg.norm(x, axis=1)
    x = x[lengths > 1e-9] / lengths[lengths > 1e-9, None]
    return x[:, :n] + 1j * x[:, n:]


def directional_sup(
    f: HarmonicMapBase, z, p: float | None = None, budget: int = 4096, seed: int = 0, refine: int = 4
) -> float:
    """Estimate ``|grad ||f(z)||_p|`` as the largest one-sided directional derivative.

    The directional derivative along ``v`` is analytic: ``Re <J v + K conj(v), xi>``
    on the smooth branch and ``||J v + K conj(v)||_p`` where ``||f(z)||_p < 1e-12``.
    It is maximised over :func:`sphere_directions` and the best ``refine``
    directions are polished with L-BFGS. The result never exceeds the true
    supremum beyond rounding.
    """
    p = check_gradient_exponent(p if p is not None else f.codomain_p)
    z = np.asarray(z, dtype=complex)
    if z.shape != (f.dimension,):
        raise DomainError(f"point must have {f.dimension} coordinates, got shape {z.shape}")
    _interior(f, z)
    J, K = f.jacobians(z)
    if not (np.any(J) or np.any(K)):
        return 0.0
    w = f.value(z)
    n = f.dimension
    if lp_norm(w, p) < NONSMOOTH_THRESHOLD:
        def score(v):
            return lp_norm(v @ J.T + np.conj(v) @ K.T, p, axis=-1)
    else:
        c = smooth_gradient_vector(J, K, w, p)

        def score(v):
            return np.real(v @ c)

    dirs = sphere_directions(n, budget, seed)
    vals = score(dirs)
    order = np.argsort(vals)[::-1]
    best = float(vals[order[0]])

    def neg(x):
        length = np.linalg.norm(x)
        if length == 0:
            return 0.0
        v = (x[:n] + 1j * x[n:]) / length
        return -float(score(v[None, :])[0])

    for idx in order[:refine]:
        v0 = dirs[idx]
        res = optimize.minimize(neg, np.concatenate([v0.real, v0.imag]), method="L-BFGS-B",
                                options={"maxiter": 500, "ftol": 1e-15, "gtol": 1e-12})
        best = max(best, -float(res.fun))
    return best


__all__ = [
    "DualVector",
    "check_gradient_exponent",
    "conjugate_exponent",
    "directional_sup",
    "dual_vector",
    "grad_norm_1d",
    "gradient_norm_exact",
    "smooth_gradient_vector",
    "sphere_directions",
]
