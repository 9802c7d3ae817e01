"""Extremal functions and automorphisms that attain the sharp bounds.

Closed forms are used for evaluation; series forms (``fm_series``,
``polydisc_extremal``) exist for coefficient-level checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from splab.errors import DomainError
from splab.multiindex import MultiIndex
from splab.series import HarmonicMapBase, PowerSeriesPair, lp_norm

TWO_OVER_PI = 2.0 / math.pi


# --- disc maps ------------------------------------------------------------

def _check_disc(zeta, label="zeta"):
    m = np.max(np.abs(zeta)) if np.ndim(zeta) else abs(zeta)
    if not m < 1:
        raise DomainError(f"|{label}| = {m} must be < 1")


def colonna_values(zeta) -> np.ndarray:
    """Vectorised ``(2/pi) arctan(2 Im(zeta) / (1 - |zeta|^2))``."""
    zeta = np.asarray(zeta, dtype=complex)
    return TWO_OVER_PI * np.arctan(2.0 * zeta.imag / (1.0 - np.abs(zeta) ** 2))


def colonna_extremal(zeta: complex) -> float:
    """Harmonic map of the disc onto ``(-1, 1)`` with gradient ``4/pi`` at 0.

    Equals ``(2/pi) arctan(i(conj(zeta) - zeta)/(1 - |zeta|^2))``; the argument
    is real, so the principal arctan branch is unambiguous.
    """
    zeta = complex(zeta)
    _check_disc(zeta)
    return float(colonna_values(zeta))


def colonna_wirtinger(zeta) -> tuple[np.ndarray, np.ndarray]:
    """``(dg/dzeta, dg/dconj(zeta))``; the second is the conjugate of the first since ``g`` is real."""
    zeta = np.asarray(zeta, dtype=complex)
    s = 1.0 - np.abs(zeta) ** 2
    t = 2.0 * zeta.imag / s
    dt = -1j * (1.0 - np.conj(zeta) ** 2) / s**2
    dg = TWO_OVER_PI * dt / (1.0 + t * t)
    return dg, np.conj(dg)


@dataclass(frozen=True)
class MobiusMap:
    """``zeta -> orientation * (a + zeta) / (1 + conj(a) zeta)``, a disc automorphism."""

    a: complex
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        if not abs(self.a) < 1:
            raise DomainError(f"Mobius parameter needs |a| < 1, got |a| = {abs(self.a)}")
        if self.orientation not in (1, -1):
            raise DomainError(f"orientation must be +1 or -1, got {self.orientation}")

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = self.orientation * (self.a + zeta) / (1.0 + np.conj(self.a) * zeta)
        return complex(out) if out.ndim == 0 else out

    def derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = self.orientation * (1.0 - abs(self.a) ** 2) / (1.0 + np.conj(self.a) * zeta) ** 2
        return complex(out) if out.ndim == 0 else out

    def inverse(self) -> "MobiusInverse":
        return MobiusInverse(self)


@dataclass(frozen=True)
class MobiusInverse:
    forward: MobiusMap

    def __call__(self, w):
        w = np.asarray(w, dtype=complex) * self.forward.orientation
        return MobiusMap(-self.forward.a)(w)


def mobius(a: complex) -> MobiusMap:
    return MobiusMap(a)


def mobius_inverse(a: complex) -> MobiusInverse:
    return MobiusMap(a).inverse()


# --- ball automorphisms ---------------------------------------------------

def align_unitary(a) -> np.ndarray:
    """Unitary ``U`` with ``U a = ||a||_2 e_1``, from one Householder reflection.

    With ``theta = arg(a_1)`` and ``v = a + e^{i theta} ||a|| e_1`` the reflection
    ``H = I - 2 v v^H / (v^H v)`` sends ``a`` to ``-e^{i theta} ||a|| e_1``; a
    diagonal phase fixes the first entry.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    r = float(np.linalg.norm(a))
    if r == 0:
        return np.eye(n, dtype=complex)
    phase = np.exp(1j * np.angle(a[0])) if a[0] != 0 else 1.0
    v = a.copy()
    v[0] += phase * r
    H = np.eye(n, dtype=complex) - 2.0 * np.outer(v, np.conj(v)) / np.vdot(v, v).real
    D = np.eye(n, dtype=complex)
    D[0, 0] = -np.conj(phase)
    return D @ H


@dataclass(frozen=True, eq=False)
class BallAutomorphism:
    """``phi(z) = P (z - xi) / (1 - <z, xi>)`` with ``P = diag(1, s, ..., s) U_xi``.

    ``s = sqrt(1 - ||xi||^2)`` and ``U_xi xi = ||xi|| e_1``. Then ``phi(xi) = 0``
    and ``phi`` maps the Euclidean unit ball onto itself.
    """

    center: np.ndarray
    s: float = field(init=False)
    unitary: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        xi = np.asarray(self.center, dtype=complex).copy()
        if xi.ndim != 1:
            raise DomainError("center must be a vector")
        r2 = float(np.vdot(xi, xi).real)
        if not r2 < 1:
            raise DomainError(f"center needs ||xi||_2 < 1, got {math.sqrt(r2)}")
        xi.setflags(write=False)
        object.__setattr__(self, "center", xi)
        object.__setattr__(self, "s", math.sqrt(1.0 - r2))
        object.__setattr__(self, "unitary", align_unitary(xi))

    @property
    def matrix(self) -> np.ndarray:
        scale = np.full(self.center.shape[0], self.s)
        scale[0] = 1.0
        return scale[:, None] * self.unitary

    def project(self, z) -> np.ndarray:
        """Orthogonal projection onto the complex line spanned by the center."""
        z = np.asarray(z, dtype=complex)
        xi = self.center
        r2 = np.vdot(xi, xi).real
        if r2 == 0:
            return np.zeros_like(z)
        return (z @ np.conj(xi))[..., None] * xi / r2

    def project_complement(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return z - self.project(z)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        denom = 1.0 - z @ np.conj(self.center)
        return ((z - self.center) @ self.matrix.T) / np.asarray(denom)[..., None]


def ball_automorphism(xi) -> BallAutomorphism:
    return BallAutomorphism(np.asarray(xi, dtype=complex))


# --- closed-form extremal maps -------------------------------------------

@dataclass(frozen=True, eq=False)
class Thm2PlusExtremal(HarmonicMapBase):
    """``f(z) = (g(phi((U z)_1)), 0, ..., 0)`` with ``g`` the Colonna extremal,
    ``phi(zeta) = (zeta - b)/(1 - b zeta)``, ``b = ||a||_2`` and ``U a = b e_1``."""

    center: np.ndarray
    nu: int = 1
    codomain_p: float = 2.0
    domain_p: float = 2.0
    codomain_real: bool = True

    def __post_init__(self):
        a = np.asarray(self.center, dtype=complex)
        if not np.linalg.norm(a) < 1:
            raise DomainError(f"center needs ||a||_2 < 1, got {np.linalg.norm(a)}")
        if self.nu < 1:
            raise DomainError(f"nu must be >= 1, got {self.nu}")
        object.__setattr__(self, "center", a)
        object.__setattr__(self, "_row", align_unitary(a)[0])
        object.__setattr__(self, "_disc", MobiusMap(-float(np.linalg.norm(a))))

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    @property
    def predicted_gradient(self) -> float:
        return (4.0 / math.pi) / (1.0 - float(np.vdot(self.center, self.center).real))

    def values(self, z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        w = z @ self._row
        out = np.zeros((z.shape[0], self.nu), dtype=complex)
        out[:, 0] = colonna_values(self._disc(w))
        return out

    def jacobians(self, z):
        z = np.asarray(z, dtype=complex)
        w = complex(z @ self._row)
        zeta = self._disc(w)
        dphi = self._disc.derivative(w)
        gz, gzbar = colonna_wirtinger(zeta)
        J = np.zeros((self.nu, self.dimension), dtype=complex)
        K = np.zeros_like(J)
        J[0] = gz * dphi * self._row
        K[0] = gzbar * np.conj(dphi) * np.conj(self._row)
        return J, K


def thm2plus_extremal(a, nu: int = 1, p: float = 2.0) -> tuple[Thm2PlusExtremal, float]:
    """Sharpness witness of ``|grad ||f(z)||_p| <= (4/pi)/(1 - ||z||^2)`` at ``z = a``.

    Returns the map and the predicted gradient ``(4/pi)/(1 - ||a||_2^2)``.
    """
    f = Thm2PlusExtremal(np.asarray(a, dtype=complex), nu, float(p))
    return f, f.predicted_gradient


@dataclass(frozen=True, eq=False)
class PolydiscAutomorphismMap(HarmonicMapBase):
    """``f(z) = ((z_1 - a_1)/(1 - conj(a_1) z_1), 0, ..., 0)`` on the polydisc."""

    center: np.ndarray
    nu: int = 1
    domain_p: float = math.inf
    codomain_p: float = 2.0
    codomain_real: bool = False

    def __post_init__(self):
        a = np.asarray(self.center, dtype=complex)
        if not np.max(np.abs(a)) < 1:
            raise DomainError(f"center needs ||a||_inf < 1, got {np.max(np.abs(a))}")
        object.__setattr__(self, "center", a)
        object.__setattr__(self, "_disc", MobiusMap(-a[0]))

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    def values(self, z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        out = np.zeros((z.shape[0], self.nu), dtype=complex)
        out[:, 0] = self._disc(z[:, 0])
        return out

    def jacobians(self, z):
        z = np.asarray(z, dtype=complex)
        J = np.zeros((self.nu, self.dimension), dtype=complex)
        J[0, 0] = self._disc.derivative(z[0])
        return J, np.zeros_like(J)


def thm3plus_extremal(a, nu: int = 1) -> PolydiscAutomorphismMap:
    """Equality witness for the polydisc Schwarz-Pick sum at ``z = a``."""
    return PolydiscAutomorphismMap(np.asarray(a, dtype=complex), nu)


@dataclass(frozen=True, eq=False)
class FmExtremal(HarmonicMapBase):
    """``f_m(z) = (2/pi) arg((1 + z^m)/(1 - z^m))`` on the unit disc, real-valued."""

    m: int
    nu: int = 1
    dimension: int = 1
    domain_p: float = 2.0
    codomain_p: float = 2.0
    codomain_real: bool = True

    def values(self, z) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        w = z[:, 0] ** self.m
        return (TWO_OVER_PI * np.angle((1 + w) / (1 - w)))[:, None].astype(complex)

    def jacobians(self, z):
        zeta = complex(np.asarray(z, dtype=complex).ravel()[0])
        w = zeta**self.m
        dz = (2.0 * self.m * zeta ** (self.m - 1) / (1 - w * w)) / (1j * math.pi)
        return np.array([[dz]]), np.array([[np.conj(dz)]])


def fm_closed_form(z, m: int) -> np.ndarray:
    return FmExtremal(m).values(np.reshape(np.asarray(z, dtype=complex), (-1, 1)))[:, 0].real


def fm_series(m: int, terms: int) -> PowerSeriesPair:
    """Series of ``f_m`` through ``terms`` odd powers of ``z^m``.

    ``(2/pi) arg((1+w)/(1-w)) = (2/pi) Im 2 sum_j w^(2j-1)/(2j-1)``, hence
    ``a = b = -2i / (pi (2j-1))`` at degree ``m(2j-1)``.
    """
    if m < 1 or terms < 1:
        raise DomainError(f"need m >= 1 and terms >= 1, got m={m}, terms={terms}")
    coeffs = {}
    for j in range(1, terms + 1):
        coeffs[MultiIndex.of(m * (2 * j - 1))] = -2j / (math.pi * (2 * j - 1))
    return PowerSeriesPair(1, m * (2 * terms - 1), coeffs, dict(coeffs))


def fm_truncation_bound(z, m: int, terms: int, extra: int = 2000) -> float:
    """``2 sum_{j > terms} |z|^(m(2j-1)) (4/pi)/(2j-1)``, summed until negligible."""
    r = abs(complex(z))
    total = 0.0
    for j in range(terms + 1, terms + 1 + extra):
        term = r ** (m * (2 * j - 1)) * (4.0 / math.pi) / (2 * j - 1)
        total += term
        if term < 1e-18:
            break
    return 2.0 * total


def polydisc_extremal(n: int, axis: int, degree_cap: int) -> PowerSeriesPair:
    """``-2 z_k / (1 - z_k) = -2 sum_{j>=1} z_k^j`` truncated at ``degree_cap``.

    ``axis`` is the 0-based coordinate ``k``. ``Re f < 1`` on the polydisc and ``f(0) = 0``.
    """
    if not 0 <= axis < n:
        raise DomainError(f"axis must lie in [0, {n}), got {axis}")
    if degree_cap < 1:
        raise DomainError(f"degree_cap must be >= 1, got {degree_cap}")
    coeffs = {MultiIndex.unit(n, axis, j): -2.0 for j in range(1, degree_cap + 1)}
    return PowerSeriesPair(n, degree_cap, coeffs)


def polydisc_extremal_closed(z, axis: int = 0) -> np.ndarray:
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    zk = z[:, axis]
    return -2.0 * zk / (1.0 - zk)


__all__ = [
    "BallAutomorphism",
    "FmExtremal",
    "MobiusMap",
    "PolydiscAutomorphismMap",
    "Thm2PlusExtremal",
    "align_unitary",
    "ball_automorphism",
    "colonna_extremal",
    "colonna_values",
    "colonna_wirtinger",
    "fm_closed_form",
    "fm_series",
    "fm_truncation_bound",
    "mobius",
    "mobius_inverse",
    "polydisc_extremal",
    "polydisc_extremal_closed",
    "thm2plus_extremal",
    "thm3plus_extremal",
]
