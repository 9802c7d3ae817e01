"""Truncated multi-index power series for pluriharmonic functions.

A pluriharmonic ``f = h + conj(g)`` is stored as two coefficient maps::

    h(z) = sum_alpha a_alpha z^alpha,    g(z) = sum_alpha b_alpha z^alpha,   g(0) = 0

so ``f(z) = sum a_alpha z^alpha + sum conj(b_alpha) conj(z)^alpha``. Note that
``f`` is real-valued exactly when ``b_alpha == a_alpha`` for ``|alpha| >= 1`` and
``a_0`` is real.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence, TextIO

import numpy as np
from scipy import optimize

from splab import kernels
from splab.errors import AliasingError, DomainError, SeriesFormatError
from splab.multiindex import (
    MultiIndex,
    as_multiindex,
    canonical_key,
    enumerate_up_to,
)

RESCALE_SAFETY = 1.05


def _as_key(alpha, n: int) -> MultiIndex:
    key = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
    if len(key) != n:
        raise DomainError(f"multi-index {key} has length {len(key)}, expected {n}")
    return key


def _freeze(coeffs: Mapping, n: int, cap: int, label: str) -> Mapping[MultiIndex, complex]:
    items = {}
    for alpha, c in coeffs.items():
        key = _as_key(alpha, n)
        if key.degree > cap:
            raise DomainError(f"{label}-coefficient at {key} exceeds degree cap {cap}")
        c = complex(c)
        if c != 0:
            items[key] = items.get(key, 0) + c
    ordered = dict(sorted(items.items(), key=lambda kv: canonical_key(kv[0])))
    return MappingProxyType(ordered)


@dataclass(frozen=True, eq=False)
class PowerSeriesPair:
    """Coefficients ``(a_alpha, b_alpha)`` of ``f = h + conj(g)`` up to degree ``degree_cap``."""

    dimension: int
    degree_cap: int
    a_coeffs: Mapping[MultiIndex, complex] = field(default_factory=dict)
    b_coeffs: Mapping[MultiIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dimension}")
        if self.degree_cap < 0:
            raise DomainError(f"degree_cap must be >= 0, got {self.degree_cap}")
        a = _freeze(self.a_coeffs, self.dimension, self.degree_cap, "A")
        b = _freeze(self.b_coeffs, self.dimension, self.degree_cap, "B")
        if MultiIndex.zero(self.dimension) in b:
            raise DomainError("b-coefficients must vanish at alpha = 0 (g(0) = 0)")
        object.__setattr__(self, "a_coeffs", a)
        object.__setattr__(self, "b_coeffs", b)

    # --- construction helpers -------------------------------------------

    @classmethod
    def zero(cls, dimension: int, degree_cap: int = 0) -> "PowerSeriesPair":
        return cls(dimension, degree_cap)

    @classmethod
    def constant(cls, dimension: int, c: complex, degree_cap: int = 0) -> "PowerSeriesPair":
        return cls(dimension, degree_cap, {MultiIndex.zero(dimension): c})

    def __eq__(self, other):
        if not isinstance(other, PowerSeriesPair):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and dict(self.a_coeffs) == dict(other.a_coeffs)
            and dict(self.b_coeffs) == dict(other.b_coeffs)
        )

    def __repr__(self):
        return (
            f"PowerSeriesPair(n={self.dimension}, D={self.degree_cap}, "
            f"{len(self.a_coeffs)} a-terms, {len(self.b_coeffs)} b-terms)"
        )

    def a(self, alpha) -> complex:
        return self.a_coeffs.get(_as_key(alpha, self.dimension), 0j)

    def b(self, alpha) -> complex:
        return self.b_coeffs.get(_as_key(alpha, self.dimension), 0j)

    def support(self) -> list[MultiIndex]:
        keys = set(self.a_coeffs) | set(self.b_coeffs)
        return sorted(keys, key=canonical_key)

    def scaled(self, factor: complex) -> "PowerSeriesPair":
        """Multiply ``f`` by a real factor (complex factors would break ``g(0)=0`` symmetry only if
        applied to ``conj(g)``; here ``b`` is scaled by ``conj(factor)`` so that ``f -> factor*f``)."""
        factor = complex(factor)
        return PowerSeriesPair(
            self.dimension,
            self.degree_cap,
            {k: factor * v for k, v in self.a_coeffs.items()},
            {k: factor.conjugate() * v for k, v in self.b_coeffs.items()},
        )

    def plus_constant(self, c: complex) -> "PowerSeriesPair":
        a = dict(self.a_coeffs)
        zero = MultiIndex.zero(self.dimension)
        a[zero] = a.get(zero, 0) + c
        return PowerSeriesPair(self.dimension, self.degree_cap, a, self.b_coeffs)

    def homogeneous_part(self, k: int) -> "PowerSeriesPair":
        return PowerSeriesPair(
            self.dimension,
            self.degree_cap,
            {al: c for al, c in self.a_coeffs.items() if al.degree == k},
            {al: c for al, c in self.b_coeffs.items() if al.degree == k},
        )

    # --- dense representation -------------------------------------------

    @cached_property
    def _dense(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        keys = self.support()
        n = self.dimension
        exps = np.array([k.exponents for k in keys], dtype=np.int64).reshape(len(keys), n)
        a = np.array([self.a_coeffs.get(k, 0j) for k in keys], dtype=complex)
        b = np.array([self.b_coeffs.get(k, 0j) for k in keys], dtype=complex)
        return exps, a, b

    def _points(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            z = z[None, :]
        if z.ndim != 2 or z.shape[1] != self.dimension:
            raise DomainError(f"points must have {self.dimension} coordinates, got shape {z.shape}")
        return np.ascontiguousarray(z)

    def holomorphic_parts(self, z) -> tuple[np.ndarray, np.ndarray]:
        """``(h(z), g(z))`` at each row of ``z``."""
        exps, a, b = self._dense
        pts = self._points(z)
        if exps.shape[0] == 0:
            zeros = np.zeros(pts.shape[0], dtype=complex)
            return zeros, zeros.copy()
        mon = kernels.monomials(pts, exps)
        return mon @ a, mon @ b

    def evaluate_many(self, z) -> np.ndarray:
        h, g = self.holomorphic_parts(z)
        return h + np.conj(g)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        vals = self.evaluate_many(z)
        return complex(vals[0]) if z.ndim == 1 else vals

    # --- calculus ---------------------------------------------------------

    @cached_property
    def _first_derivatives(self) -> tuple["PowerSeriesPair", ...]:
        # d/dz_k applied to both h and g, stored as holomorphic a-parts.
        out = []
        for k in range(self.dimension):
            ek = MultiIndex.unit(self.dimension, k)
            dh = _differentiate(self.a_coeffs, ek)
            dg = _differentiate(self.b_coeffs, ek)
            cap = max(self.degree_cap - 1, 0)
            out.append((PowerSeriesPair(self.dimension, cap, dh), PowerSeriesPair(self.dimension, cap, dg)))
        return tuple(out)

    def wirtinger(self, z) -> tuple[np.ndarray, np.ndarray]:
        """``(df/dz_k, df/dconj(z_k))`` at each row of ``z``; shapes (P, n)."""
        pts = self._points(z)
        dz = np.empty(pts.shape, dtype=complex)
        dzbar = np.empty(pts.shape, dtype=complex)
        for k, (dh, dg) in enumerate(self._first_derivatives):
            dz[:, k] = dh.holomorphic_parts(pts)[0]
            dzbar[:, k] = np.conj(dg.holomorphic_parts(pts)[0])
        return dz, dzbar


def _differentiate(coeffs: Mapping[MultiIndex, complex], m: MultiIndex) -> dict[MultiIndex, complex]:
    """Apply ``d^|m|/dz^m`` to a holomorphic coefficient map."""
    out = {}
    for alpha, c in coeffs.items():
        if not alpha.dominates(m):
            continue
        factor = 1
        for ak, mk in zip(alpha, m):
            factor *= math.perm(ak, mk)  # alpha_k! / (alpha_k - m_k)!
        out[alpha - m] = c * factor
    return out


def evaluate(f: PowerSeriesPair, z) -> complex:
    """``f(z)`` at one point ``z`` of length ``f.dimension``."""
    z = np.asarray(z, dtype=complex)
    if z.ndim != 1 or z.shape[0] != f.dimension:
        raise DomainError(f"point must have {f.dimension} coordinates, got shape {z.shape}")
    return complex(f.evaluate_many(z[None, :])[0])


def partial_derivative(f: PowerSeriesPair, m, conjugated: bool = False) -> PowerSeriesPair:
    """Formal partial derivative of order ``m``.

    With ``conjugated=False`` the result represents ``d^|m| f / dz^m``, i.e.
    the differentiated ``h``. With ``conjugated=True`` it represents
    ``d^|m| f / dconj(z)^m = conj(d^|m| g / dz^m)``; the constant term of that
    derivative is moved into the ``a``-part (as its conjugate) to keep
    ``g(0) = 0``.
    """
    m = as_multiindex(m, f.dimension)
    if len(m) != f.dimension:
        raise DomainError(f"order {m} has length {len(m)}, expected {f.dimension}")
    if m.degree == 0:
        return f
    cap = max(f.degree_cap - m.degree, 0)
    zero = MultiIndex.zero(f.dimension)
    if not conjugated:
        return PowerSeriesPair(f.dimension, cap, _differentiate(f.a_coeffs, m))
    dg = _differentiate(f.b_coeffs, m)
    c0 = dg.pop(zero, 0j)
    return PowerSeriesPair(f.dimension, cap, {zero: complex(c0).conjugate()}, dg)


def derivative_at(f: PowerSeriesPair, m, z) -> tuple[complex, complex]:
    """``(d^m f/dz^m (z), d^m f/dconj(z)^m (z))`` from formal differentiation."""
    dz = partial_derivative(f, m, conjugated=False)
    dzbar = partial_derivative(f, m, conjugated=True)
    return evaluate(dz, z), evaluate(dzbar, z)


# --- vector-valued maps ---------------------------------------------------

class HarmonicMapBase:
    """Common interface of vector-valued (pluri)harmonic maps.

    Subclasses supply ``dimension``, ``nu``, ``domain_p``, ``codomain_p``,
    ``codomain_real`` and implement ``values`` and ``jacobians``.
    """

    dimension: int
    nu: int
    domain_p: float
    codomain_p: float
    codomain_real: bool

    def values(self, z) -> np.ndarray:  # (P, n) -> (P, nu)
        raise NotImplementedError

    def jacobians(self, z) -> tuple[np.ndarray, np.ndarray]:
        """``(J, K)`` with ``J[j, k] = df_j/dz_k`` and ``K[j, k] = df_j/dconj(z_k)`` at one point."""
        raise NotImplementedError

    def value(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return self.values(z[None, :])[0]

    def norm_values(self, z) -> np.ndarray:
        return lp_norm(self.values(z), self.codomain_p, axis=-1)


@dataclass(frozen=True, eq=False)
class PluriharmonicMap(HarmonicMapBase):
    """Vector ``f = (f_1, ..., f_nu)`` of series components.

    ``domain_p`` / ``codomain_p`` name the source ball ``B_{l_p^n}`` and the
    target ball; ``codomain_real`` marks maps into the real ball.
    """

    components: tuple[PowerSeriesPair, ...]
    domain_p: float = 2.0
    codomain_p: float = 2.0
    codomain_real: bool = False

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise DomainError("a map needs at least one component")
        dims = {c.dimension for c in comps}
        if len(dims) != 1:
            raise DomainError(f"components disagree on dimension: {sorted(dims)}")
        caps = {c.degree_cap for c in comps}
        if len(caps) != 1:
            cap = max(caps)
            comps = tuple(PowerSeriesPair(c.dimension, cap, c.a_coeffs, c.b_coeffs) for c in comps)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "domain_p", float(self.domain_p))
        object.__setattr__(self, "codomain_p", float(self.codomain_p))

    @property
    def dimension(self) -> int:
        return self.components[0].dimension

    @property
    def degree_cap(self) -> int:
        return self.components[0].degree_cap

    @property
    def nu(self) -> int:
        return len(self.components)

    def values(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.ndim == 1:
            z = z[None, :]
        out = np.stack([c.evaluate_many(z) for c in self.components], axis=-1)
        return out.real.astype(complex) if self.codomain_real else out

    def jacobians(self, z) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        J = np.empty((self.nu, self.dimension), dtype=complex)
        K = np.empty_like(J)
        for j, c in enumerate(self.components):
            dz, dzbar = c.wirtinger(z[None, :])
            J[j], K[j] = dz[0], dzbar[0]
        return J, K

    def scaled(self, factor: float) -> "PluriharmonicMap":
        return PluriharmonicMap(
            tuple(c.scaled(factor) for c in self.components), self.domain_p, self.codomain_p, self.codomain_real
        )


def lp_norm(x, p: float, axis=-1) -> np.ndarray:
    x = np.abs(np.asarray(x))
    if math.isinf(p):
        return np.max(x, axis=axis)
    if p == 2:
        return np.sqrt(np.sum(x * x, axis=axis))
    return np.sum(x**p, axis=axis) ** (1.0 / p)


# --- coefficient recovery -------------------------------------------------

def _sample_grid(sample: Callable, pts: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(sample(pts), dtype=complex)
        if vals.shape == (pts.shape[0],):
            return vals
    except (TypeError, ValueError, IndexError):
        pass
    return np.array([complex(sample(p)) for p in pts])


def extract_coefficients(
    sample: Callable, dimension: int, radius: float, degree_cap: int, grid: int
) -> PowerSeriesPair:
    """Recover ``(a_alpha, b_alpha)`` from samples on the torus of polyradius ``radius``.

    ``sample`` is called with an array of points of shape (P, n) and must
    return P complex values (a scalar-only callable also works, more slowly).
    Uses the n-dimensional trapezoid rule, i.e. an FFT of the grid samples;
    holomorphic frequencies are ``+alpha`` and antiholomorphic ``-alpha``.

    Raises
    ------
    AliasingError
        If ``grid <= 2 * degree_cap``.
    """
    if not 0 < radius < 1:
        raise DomainError(f"radius must lie in (0, 1), got {radius}")
    if grid <= 2 * degree_cap:
        raise AliasingError(f"grid {grid} must exceed 2*degree_cap = {2 * degree_cap}")
    n = dimension
    theta = 2.0 * np.pi * np.arange(grid) / grid
    mesh = np.meshgrid(*([theta] * n), indexing="ij")
    pts = radius * np.exp(1j * np.stack([m.ravel() for m in mesh], axis=-1))
    vals = _sample_grid(sample, pts).reshape((grid,) * n)
    spec = np.fft.fftn(vals) / grid**n
    a, b = {}, {}
    for alpha in enumerate_up_to(n, degree_cap):
        scale = radius ** alpha.degree
        a[alpha] = spec[tuple(e % grid for e in alpha)] / scale
        if alpha.degree:
            b[alpha] = np.conj(spec[tuple((-e) % grid for e in alpha)]) / scale
    return PowerSeriesPair(n, degree_cap, a, b)


def truncation_tail_estimate(
    sample: Callable, dimension: int, degree_cap: int, radius: float, extract_radius: float = 0.9, grid: int | None = None
) -> float:
    """Estimate ``sum_{D < |alpha| <= 2D} (|a_alpha| + |b_alpha|) radius^|alpha|``.

    Coefficients beyond the cap are recovered at ``extract_radius``; the
    estimate is reported next to pointwise checks on truncated series.
    """
    top = 2 * max(degree_cap, 1)
    grid = grid or 2 * top + 2
    ext = extract_coefficients(sample, dimension, extract_radius, top, grid)
    total = 0.0
    for alpha in ext.support():
        if alpha.degree > degree_cap:
            total += (abs(ext.a(alpha)) + abs(ext.b(alpha))) * radius ** alpha.degree
    return total


# --- boundary sampling and sup estimates ---------------------------------

def sample_sphere(n: int, p: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Complex points with ``||z||_p = 1``; for ``p = inf`` points of the torus."""
    if math.isinf(p):
        return np.exp(2j * np.pi * rng.random((count, n)))
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return z / lp_norm(z, p)[:, None]


def _structured_points(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    # Axis points, real-positive points and equal-modulus points.
    pts = []
    for k in range(n):
        for phase in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            e = np.zeros(n, dtype=complex)
            e[k] = np.exp(1j * phase)
            pts.append(e)
    pos = np.abs(rng.random((16, n))) + 1e-3
    pos = np.vstack([pos, np.ones((1, n))])
    pts.extend(pos.astype(complex))
    pts = np.array(pts)
    if math.isinf(p):
        return pts / np.maximum(np.abs(pts), 1e-300) * (np.abs(pts) > 0) + (np.abs(pts) == 0)
    return pts / lp_norm(pts, p)[:, None]


def _from_params(x: np.ndarray, n: int, p: float) -> np.ndarray:
    if math.isinf(p):
        return np.exp(1j * x[:n])
    z = x[:n] + 1j * x[n:]
    nz = lp_norm(z, p)
    return z / nz if nz > 0 else np.full(n, 1.0 / n ** (1.0 / p), dtype=complex)


def _to_params(z: np.ndarray, p: float) -> np.ndarray:
    if math.isinf(p):
        return np.angle(z)
    return np.concatenate([z.real, z.imag])


def boundary_sup(
    objective: Callable[[np.ndarray], np.ndarray],
    n: int,
    p: float,
    budget: int = 4096,
    seed: int | np.random.Generator | None = 0,
    refine: int = 4,
) -> tuple[float, np.ndarray]:
    """Lower estimate of ``sup objective`` over the unit ``l_p`` sphere.

    ``objective`` maps an array of points (P, n) to P real values. Random
    and structured boundary samples are followed by L-BFGS refinement of the
    best ``refine`` candidates. Returns the value and the maximising point.
    """
    if budget < 1:
        raise DomainError(f"budget must be >= 1, got {budget}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pts = np.vstack([_structured_points(n, p, rng), sample_sphere(n, p, budget, rng)])
    vals = np.asarray(objective(pts), dtype=float)
    order = np.argsort(vals)[::-1]
    best_val, best_pt = float(vals[order[0]]), pts[order[0]]

    def neg(x):
        return -float(objective(_from_params(x, n, p)[None, :])[0])

    for idx in order[: max(refine, 0)]:
        res = optimize.minimize(neg, _to_params(pts[idx], p), method="L-BFGS-B", options={"maxiter": 200})
        z = _from_params(res.x, n, p)
        v = float(objective(z[None, :])[0])
        if v > best_val:
            best_val, best_pt = v, z
    return best_val, best_pt


def sup_norm_estimate(f: HarmonicMapBase, budget: int = 4096, seed=0) -> float:
    """Lower estimate of ``sup ||f(z)||_{codomain_p}`` over the closed domain ball.

    By the maximum principle for the plurisubharmonic function ``||f||`` the
    supremum sits on the boundary sphere (the torus for the polydisc).
    """
    val, _ = boundary_sup(f.norm_values, f.dimension, f.domain_p, budget, seed)
    return val


def homogeneous_part_sup(f: PowerSeriesPair, k: int, p: float, budget: int = 4096, seed=0) -> float:
    """Lower estimate of ``sup |sum_{|alpha|=k} (a_alpha + b_alpha) z^alpha|`` over the ``l_p`` ball."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    coeffs = {}
    for alpha in f.support():
        if alpha.degree == k:
            coeffs[alpha] = f.a(alpha) + f.b(alpha)
    if not any(abs(c) > 0 for c in coeffs.values()):
        return 0.0
    poly = PowerSeriesPair(f.dimension, k, coeffs)
    val, _ = boundary_sup(lambda z: np.abs(poly.holomorphic_parts(z)[0]), f.dimension, p, budget, seed)
    return val


# --- random generators ----------------------------------------------------

def _random_coeffs(n: int, cap: int, decay: float, rng: np.random.Generator, with_constant: bool = True):
    a, b = {}, {}
    for alpha in enumerate_up_to(n, cap):
        scale = decay ** alpha.degree
        if alpha.degree == 0 and not with_constant:
            continue
        a[alpha] = scale * rng.random() * np.exp(2j * np.pi * rng.random())
        if alpha.degree:
            b[alpha] = scale * rng.random() * np.exp(2j * np.pi * rng.random())
    return a, b


def random_pluriharmonic(
    n: int,
    nu: int,
    degree_cap: int,
    decay: float,
    seed=0,
    *,
    domain_p: float = 2.0,
    codomain_p: float = 2.0,
    codomain_real: bool = False,
    budget: int = 4096,
) -> PluriharmonicMap:
    """Random polynomial map rescaled into the open unit codomain ball.

    Coefficients have modulus ``decay**|alpha| * U(0,1)`` and uniform phase.
    For ``codomain_real`` the antiholomorphic part mirrors the holomorphic
    one (``b_alpha = a_alpha``, real ``a_0``), which makes every component
    real. The map is finally divided by ``1.05 * sup_norm_estimate``.
    """
    if decay < 0:
        raise DomainError(f"decay must be >= 0, got {decay}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    comps = []
    zero = MultiIndex.zero(n)
    for _ in range(nu):
        a, b = _random_coeffs(n, degree_cap, decay, rng)
        if codomain_real:
            a[zero] = complex(a[zero].real)
            b = {k: v for k, v in a.items() if k.degree}
        comps.append(PowerSeriesPair(n, degree_cap, a, b))
    raw = PluriharmonicMap(tuple(comps), domain_p, codomain_p, codomain_real)
    s = sup_norm_estimate(raw, budget, rng)
    if s == 0:
        return raw
    return raw.scaled(1.0 / (RESCALE_SAFETY * s))


def random_re_le_one(
    n: int, degree_cap: int, decay: float, seed=0, *, domain_p: float = 2.0, budget: int = 4096
) -> PowerSeriesPair:
    """Random pluriharmonic ``f`` with ``Re f <= 1`` on the domain ball and ``f(0) in [0, 1)``.

    Draws ``f0`` with ``f0(0) = 0`` and sets ``f = (1 - u) + (u / M) f0`` where
    ``M`` is ``1.05 * sup Re f0`` (estimated) and ``u ~ U(0, 1]``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a, b = _random_coeffs(n, degree_cap, decay, rng, with_constant=False)
    f0 = PowerSeriesPair(n, degree_cap, a, b)
    u = 1.0 - rng.random()
    if not f0.support():
        return PowerSeriesPair.constant(n, 1.0 - u, degree_cap)
    m, _ = boundary_sup(lambda z: f0.evaluate_many(z).real, n, domain_p, budget, rng)
    m_safe = RESCALE_SAFETY * m
    return f0.scaled(u / m_safe).plus_constant(1.0 - u)


# --- file format ----------------------------------------------------------

HEADER = "PHSERIES"


def format_series(f: PowerSeriesPair) -> str:
    """Text form: header ``PHSERIES n=<n> D=<D>`` then ``A [alpha] re im`` / ``B [alpha] re im`` lines."""
    lines = [f"{HEADER} n={f.dimension} D={f.degree_cap}"]
    for tag, coeffs in (("A", f.a_coeffs), ("B", f.b_coeffs)):
        for alpha, c in coeffs.items():
            lines.append(f"{tag} {alpha} {c.real:.17g} {c.imag:.17g}")
    return "\n".join(lines) + "\n"


def write_series(f: PowerSeriesPair, target: str | os.PathLike | TextIO) -> None:
    text = format_series(f)
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", encoding="ascii") as fh:
            fh.write(text)


def parse_series(text: str | Iterable[str]) -> PowerSeriesPair:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    header_seen = False
    n = cap = None
    a, b = {}, {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if not header_seen:
            if parts[0] != HEADER or len(parts) != 3:
                raise SeriesFormatError(f"expected '{HEADER} n=<n> D=<D>' header, got {line!r}", lineno)
            try:
                fields = dict(p.split("=", 1) for p in parts[1:])
                n, cap = int(fields["n"]), int(fields["D"])
            except (KeyError, ValueError) as exc:
                raise SeriesFormatError(f"malformed header {line!r}", lineno) from exc
            header_seen = True
            continue
        if len(parts) != 4 or parts[0] not in ("A", "B"):
            raise SeriesFormatError(f"expected 'A|B [alpha] re im', got {line!r}", lineno)
        try:
            alpha = MultiIndex.parse(parts[1])
            c = complex(float(parts[2]), float(parts[3]))
        except (DomainError, ValueError) as exc:
            raise SeriesFormatError(str(exc), lineno) from exc
        if len(alpha) != n or alpha.degree > cap:
            raise SeriesFormatError(f"multi-index {alpha} incompatible with n={n}, D={cap}", lineno)
        target = a if parts[0] == "A" else b
        if alpha in target:
            raise SeriesFormatError(f"duplicate coefficient {parts[0]} {alpha}", lineno)
        target[alpha] = c
    if not header_seen:
        raise SeriesFormatError("missing header", 1)
    try:
        return PowerSeriesPair(n, cap, a, b)
    except DomainError as exc:
        raise SeriesFormatError(str(exc)) from exc


def read_series(source: str | os.PathLike | TextIO) -> PowerSeriesPair:
    if hasattr(source, "read"):
        return parse_series(source.read())
    with open(source, encoding="ascii") as fh:
        return parse_series(fh.read())


__all__ = [
    "HarmonicMapBase",
    "PluriharmonicMap",
    "PowerSeriesPair",
    "boundary_sup",
    "derivative_at",
    "evaluate",
    "extract_coefficients",
    "format_series",
    "homogeneous_part_sup",
    "lp_norm",
    "parse_series",
    "partial_derivative",
    "random_pluriharmonic",
    "random_re_le_one",
    "read_series",
    "sample_sphere",
    "sup_norm_estimate",
    "truncation_tail_estimate",
    "write_series",
]
