"""Bounded harmonic functions on the unit ball of R^3 through the Poisson integral.

``u(x) = int_{S^2} P(x, zeta) phi(zeta) dsigma(zeta)`` with
``P(x, zeta) = (1 - |x|^2) / (4 pi |x - zeta|^3)``.

Quadrature runs in a rotated frame where ``x`` sits on the positive
``x_3`` axis: the kernel's peak then lies at the pole of the product grid,
where the Gauss-Legendre polar nodes cluster, and rotation invariance holds
to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from splab import kernels
from splab.errors import DomainError
from splab.gradients import check_gradient_exponent, dual_vector
from splab.numerics import legendre_rule, log_gamma
from splab.series import lp_norm

DEFAULT_POLAR = 256
DEFAULT_AZIMUTHAL = 512


def sphere_area(n: int) -> float:
    """Surface area ``2 pi^(n/2) / Gamma(n/2)`` of the unit sphere in R^n."""
    if n < 2:
        raise DomainError(f"sphere_area needs n >= 2, got {n}")
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Product rule on S^2: Gauss-Legendre in ``cos(theta)`` times trapezoid in azimuth.

    With ``polar_split`` set, the ``cos(theta)`` interval is cut there and each
    half gets ``polar // 2`` nodes, so a kink along that latitude costs no accuracy.
    """

    polar: int = DEFAULT_POLAR
    azimuthal: int = DEFAULT_AZIMUTHAL
    polar_split: float | None = None
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.polar < 2 or self.azimuthal < 3:
            raise DomainError(f"grid too coarse: polar={self.polar}, azimuthal={self.azimuthal}")
        if self.polar_split is None:
            t, wt = legendre_rule(self.polar)
        else:
            s = float(self.polar_split)
            if not -1 < s < 1:
                raise DomainError(f"polar_split must lie in (-1, 1), got {s}")
            x, w = legendre_rule(max(self.polar // 2, 2))
            t = np.concatenate([0.5 * (s + 1) * x + 0.5 * (s - 1), 0.5 * (1 - s) * x + 0.5 * (1 + s)])
            wt = np.concatenate([0.5 * (s + 1) * w, 0.5 * (1 - s) * w])
        phi = 2.0 * np.pi * np.arange(self.azimuthal) / self.azimuthal
        sin_t = np.sqrt(1.0 - t * t)
        nodes = np.empty((t.shape[0], self.azimuthal, 3))
        nodes[..., 0] = sin_t[:, None] * np.cos(phi)[None, :]
        nodes[..., 1] = sin_t[:, None] * np.sin(phi)[None, :]
        nodes[..., 2] = t[:, None]
        weights = np.repeat(wt * (2.0 * np.pi / self.azimuthal), self.azimuthal)
        nodes = np.ascontiguousarray(nodes.reshape(-1, 3))
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


@lru_cache(maxsize=16)
def sphere_grid(polar: int = DEFAULT_POLAR, azimuthal: int = DEFAULT_AZIMUTHAL, polar_split: float | None = None) -> SphereGrid:
    return SphereGrid(polar, azimuthal, polar_split)


def kink_latitude(r: float) -> float:
    """``cos(theta)`` where ``<grad_x P(x, zeta), e_3>`` changes sign for ``x = r e_3``.

    Solving ``-2 r |x - zeta|^2 = 3 (1 - r^2)(r - t)`` with ``|x - zeta|^2 = 1 - 2 r t + r^2``
    gives ``t = (5 r - r^3) / (3 + r^2)``.
    """
    return (5.0 * r - r**3) / (3.0 + r * r)


def aligned_grid(r: float, polar: int = DEFAULT_POLAR, azimuthal: int = DEFAULT_AZIMUTHAL) -> SphereGrid:
    """Grid split at the kink of the radial-direction kernel for ``|x| = r``."""
    return sphere_grid(polar, azimuthal, kink_latitude(float(r)))


@dataclass(frozen=True)
class BoundaryDensity:
    """Boundary data ``phi`` on S^2 with ``|phi| <= 1``.

    ``value`` receives an (N, 3) array of unit vectors and returns N reals;
    scalar-only callables are accepted and applied row by row.
    """

    value: Callable
    label: str = "phi"

    def __call__(self, zeta) -> np.ndarray:
        zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
        try:
            out = np.asarray(self.value(zeta), dtype=float)
            if out.shape == (zeta.shape[0],):
                return out
            if out.shape == ():
                return np.full(zeta.shape[0], float(out))
        except (TypeError, ValueError, IndexError):
            pass
        return np.array([float(self.value(z)) for z in zeta])

    def sample(self, zeta, check: bool = True) -> np.ndarray:
        vals = self(zeta)
        if check:
            worst = float(np.max(np.abs(vals))) if vals.size else 0.0
            if worst > 1.0 + 1e-12:
                raise DomainError(f"boundary density {self.label!r} has |phi| = {worst} > 1")
        return vals


def constant_density(c: float) -> BoundaryDensity:
    return BoundaryDensity(lambda zeta: np.full(np.shape(zeta)[0], float(c)), f"const {c}")


def coordinate_density(k: int, scale: float = 1.0) -> BoundaryDensity:
    return BoundaryDensity(lambda zeta: scale * np.asarray(zeta)[:, k], f"{scale}*zeta_{k + 1}")


def _check_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise DomainError(f"x must be a real 3-vector, got shape {x.shape}")
    r = float(np.linalg.norm(x))
    if not r < 1:
        raise DomainError(f"||x||_2 = {r} must be < 1")
    return x


def _orthonormal_completion(e3: np.ndarray, hint: np.ndarray | None) -> np.ndarray:
    # Rows (e1, e2, e3) of a proper rotation; e1 follows the component of hint orthogonal to e3.
    if hint is not None:
        perp = hint - (hint @ e3) * e3
        if np.linalg.norm(perp) > 1e-12:
            e1 = perp / np.linalg.norm(perp)
            return np.array([e1, np.cross(e3, e1), e3])
    trial = np.eye(3)[int(np.argmin(np.abs(e3)))]
    e1 = trial - (trial @ e3) * e3
    e1 /= np.linalg.norm(e1)
    return np.array([e1, np.cross(e3, e1), e3])


def adapted_frame(x: np.ndarray, iota: np.ndarray | None = None) -> np.ndarray:
    """Rotation ``R`` with ``R x = |x| e_3`` (or ``R iota = e_3`` at ``x = 0``)
    and ``R iota`` in the ``x_1 x_3`` half-plane with nonnegative first entry."""
    r = float(np.linalg.norm(x))
    if r > 0:
        return _orthonormal_completion(x / r, iota)
    if iota is not None:
        return _orthonormal_completion(iota / np.linalg.norm(iota), None)
    return np.eye(3)


def _framed(x: np.ndarray, grid: SphereGrid, iota=None):
    R = adapted_frame(x, iota)
    x_frame = np.array([0.0, 0.0, float(np.linalg.norm(x))]) if np.linalg.norm(x) > 0 else np.zeros(3)
    world = grid.nodes @ R  # node eta in the frame is R^T eta in world coordinates
    return R, x_frame, world


def poisson_apply(phis: Sequence[BoundaryDensity], x, grid: SphereGrid | None = None, check: bool = True):
    """Values ``(u_j(x))`` and gradients ``(grad u_j(x))`` of the Poisson extensions of ``phis``."""
    grid = grid or sphere_grid()
    x = _check_point(x)
    R, x_frame, world = _framed(x, grid)
    values = np.column_stack([phi.sample(world, check) for phi in phis])
    u, grad_frame = kernels.poisson_apply(x_frame, grid.nodes, grid.weights, np.ascontiguousarray(values))
    return u, grad_frame @ R


def poisson_eval(phi: BoundaryDensity, x, grid: SphereGrid | None = None) -> float:
    """``u(x) = int P(x, zeta) phi(zeta) dsigma`` by product quadrature."""
    u, _ = poisson_apply([phi], x, grid)
    return float(u[0])


def poisson_gradient(phi: BoundaryDensity, x, grid: SphereGrid | None = None) -> np.ndarray:
    """``grad u(x)`` from the differentiated kernel."""
    _, g = poisson_apply([phi], x, grid)
    return g[0]


def directional_constant(x, iota, grid: SphereGrid | None = None) -> float:
    """``C(x, iota) = int |<grad_x P(x, zeta), iota>| dsigma(zeta)``.

    This is the smallest constant with ``|<grad u(x), iota>| <= C sup|u|``:
    the supremum of a linear functional over ``|phi| <= 1`` is the L1 norm
    of its kernel, attained by the sign of the kernel. When ``iota`` is
    parallel to ``x`` (or ``x = 0``) the kernel's sign change is a latitude of
    the adapted frame and an unsplit grid is replaced by one split there.
    """
    grid = grid or sphere_grid()
    x = _check_point(x)
    iota = np.asarray(iota, dtype=float)
    if iota.shape != (3,) or abs(np.linalg.norm(iota) - 1.0) > 1e-12:
        raise DomainError("iota must be a unit 3-vector")
    R, x_frame, _ = _framed(x, grid, iota)
    iota_frame = R @ iota
    if grid.polar_split is None and np.linalg.norm(iota_frame[:2]) < 1e-14:
        grid = aligned_grid(x_frame[2], grid.polar, grid.azimuthal)
        if iota_frame[2] < 0:
            iota_frame = -iota_frame  # |<k, -iota>| = |<k, iota>|
    return float(kernels.poisson_abs_directional(x_frame, iota_frame, grid.nodes, grid.weights))


def directional_constant_convergence(x, iota, grid: SphereGrid | None = None) -> tuple[float, float]:
    """``(C, |C - C_doubled|)``: the value and its change when both node counts double."""
    grid = grid or sphere_grid()
    coarse = directional_constant(x, iota, grid)
    fine = directional_constant(x, iota, SphereGrid(2 * grid.polar, 2 * grid.azimuthal, grid.polar_split))
    return coarse, abs(fine - coarse)


def sign_witness(x, iota=None, eps: float = 1e-3) -> BoundaryDensity:
    """``tanh(<grad_x P(x, zeta), iota> / eps)``, a smoothed extremal density.

    ``iota`` defaults to ``x/|x|`` (``e_3`` at the origin).
    """
    x = _check_point(x)
    if iota is None:
        r = np.linalg.norm(x)
        iota = x / r if r > 0 else np.array([0.0, 0.0, 1.0])
    iota = np.asarray(iota, dtype=float)

    def value(zeta):
        k = kernels.poisson_directional_kernel(x, iota, np.atleast_2d(zeta))
        return np.tanh(k / eps)

    return BoundaryDensity(value, f"tanh(<grad P, iota>/{eps:g})")


def _nonsmooth_gradient(jac: np.ndarray, p: float) -> float:
    # sup over real unit theta of ||jac @ theta||_p, jac has shape (nu, 3).
    rng = np.random.default_rng(0)
    dirs = rng.standard_normal((4096, 3))
    dirs = np.vstack([np.eye(3), dirs])
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    vals = lp_norm(dirs @ jac.T, p, axis=-1)
    best = float(np.max(vals))
    for idx in np.argsort(vals)[::-1][:4]:
        res = optimize.minimize(lambda t: -float(lp_norm(jac @ (t / np.linalg.norm(t)), p)), dirs[idx])
        best = max(best, -float(res.fun))
    return best


def verify_thm0(phis: Sequence[BoundaryDensity], x, p: float = 2.0, grid: SphereGrid | None = None):
    """Check ``|grad ||u(x)||_p| <= C(|x|)`` for ``u = P[phi]`` into the real ``l_p`` ball.

    The left side is ``||Du(x)^T eta||_2`` with ``eta`` the dual vector of ``u(x)``;
    the right side is the Khavinson constant for n = 3.
    """
    from splab.bounds import khavinson_constant, make_report

    grid = grid or sphere_grid()
    x = _check_point(x)
    phis = list(phis)
    if not phis:
        raise DomainError("need at least one boundary density")
    nu = len(phis)
    if nu > 1:
        p = check_gradient_exponent(p)
    R, _, world = _framed(x, grid)
    samples = np.column_stack([phi.sample(world, check=nu == 1) for phi in phis])
    if nu > 1:
        worst = float(np.max(lp_norm(samples, p, axis=-1)))
        if worst > 1.0 + 1e-12:
            raise DomainError(f"boundary data leave the unit l_{p:g} ball: max norm {worst}")
    u, grad = poisson_apply(phis, x, grid, check=False)
    u_norm = float(lp_norm(u, p)) if nu > 1 else abs(float(u[0]))
    notes = ""
    if u_norm < 1e-12:
        lhs = _nonsmooth_gradient(grad, p) if nu > 1 else float(np.linalg.norm(grad[0]))
        notes = "u(x)=0: nonsmooth branch"
    elif nu == 1:
        lhs = float(np.linalg.norm(grad[0]))
    else:
        eta = dual_vector(u, p).entries.real
        lhs = float(np.linalg.norm(grad.T @ eta))
    rhs = khavinson_constant(3, float(np.linalg.norm(x)))
    return make_report("thm0", x, lhs, rhs, notes)


__all__ = [
    "BoundaryDensity",
    "SphereGrid",
    "adapted_frame",
    "constant_density",
    "coordinate_density",
    "aligned_grid",
    "directional_constant",
    "directional_constant_convergence",
    "kink_latitude",
    "poisson_apply",
    "poisson_eval",
    "poisson_gradient",
    "sign_witness",
    "sphere_area",
    "sphere_grid",
    "verify_thm0",
]
