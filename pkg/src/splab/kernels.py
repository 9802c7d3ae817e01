"""Hot inner loops, each with a numba and a pure-numpy implementation.

The public names (``monomials``, ``poisson_apply``, ``poisson_abs_directional``)
bind to the numba versions unless ``SPLAB_DISABLE_NUMBA`` is set; both
variants stay importable as ``*_numba`` / ``*_numpy`` for testing and
benchmarking.
"""

from __future__ import annotations

import math

import numpy as np

from splab._accel import USE_NUMBA, njit

INV_4PI = 1.0 / (4.0 * math.pi)


# --- monomial table -------------------------------------------------------

def monomials_numpy(z: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """``out[i, j] = prod_k z[i, k] ** exps[j, k]`` for points ``z`` (P, n)."""
    z = np.asarray(z)
    exps = np.asarray(exps, dtype=np.int64)
    p, n = z.shape
    m = exps.shape[0]
    if m == 0:
        return np.ones((p, 0), dtype=z.dtype)
    top = int(exps.max()) if exps.size else 0
    powers = z[:, :, None] ** np.arange(top + 1)[None, None, :]  # (P, n, top+1)
    out = np.ones((p, m), dtype=np.result_type(z.dtype, np.float64))
    for k in range(n):
        out *= powers[:, k, exps[:, k]]
    return out


@njit
def monomials_numba(z, exps):
    p, n = z.shape
    m = exps.shape[0]
    top = 0
    for j in range(m):
        for k in range(n):
            if exps[j, k] > top:
                top = exps[j, k]
    out = np.ones((p, m), dtype=z.dtype)
    powers = np.empty((n, top + 1), dtype=z.dtype)
    for i in range(p):
        for k in range(n):
            powers[k, 0] = 1.0
            for e in range(1, top + 1):
                powers[k, e] = powers[k, e - 1] * z[i, k]
        for j in range(m):
            acc = powers[0, exps[j, 0]]
            for k in range(1, n):
                acc *= powers[k, exps[j, k]]
            out[i, j] = acc
    return out


# --- Poisson integral on S^2 ---------------------------------------------

def poisson_apply_numpy(x, nodes, weights, values):
    """Poisson integral and gradient at ``x`` of vector boundary data.

    ``values`` has shape (N, nu). Returns ``(u, grad)`` with shapes (nu,) and
    (nu, 3).
    """
    d = x[None, :] - nodes
    r2 = np.einsum("ij,ij->i", d, d)
    r = np.sqrt(r2)
    inv3 = 1.0 / (r2 * r)
    one_minus = 1.0 - x @ x
    kern = INV_4PI * one_minus * inv3 * weights
    u = kern @ values
    # grad_x P = (1/4pi) [ -2x/|x-z|^3 - 3(1-|x|^2)(x-z)/|x-z|^5 ]
    gk = INV_4PI * weights[:, None] * (-2.0 * x[None, :] * inv3[:, None] - 3.0 * one_minus * d * (inv3 / r2)[:, None])
    grad = values.T @ gk
    return u, grad


@njit
def poisson_apply_numba(x, nodes, weights, values):
    n_nodes = nodes.shape[0]
    nu = values.shape[1]
    u = np.zeros(nu)
    grad = np.zeros((nu, 3))
    one_minus = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
    for i in range(n_nodes):
        d0 = x[0] - nodes[i, 0]
        d1 = x[1] - nodes[i, 1]
        d2 = x[2] - nodes[i, 2]
        r2 = d0 * d0 + d1 * d1 + d2 * d2
        inv3 = 1.0 / (r2 * math.sqrt(r2))
        inv5 = inv3 / r2
        w = weights[i] * INV_4PI
        kern = w * one_minus * inv3
        g0 = w * (-2.0 * x[0] * inv3 - 3.0 * one_minus * d0 * inv5)
        g1 = w * (-2.0 * x[1] * inv3 - 3.0 * one_minus * d1 * inv5)
        g2 = w * (-2.0 * x[2] * inv3 - 3.0 * one_minus * d2 * inv5)
        for j in range(nu):
            v = values[i, j]
            u[j] += kern * v
            grad[j, 0] += g0 * v
            grad[j, 1] += g1 * v
            grad[j, 2] += g2 * v
    return u, grad


def poisson_directional_kernel_numpy(x, iota, nodes):
    """``<grad_x P(x, zeta), iota>`` at every node (unweighted)."""
    d = x[None, :] - nodes
    r2 = np.einsum("ij,ij->i", d, d)
    inv3 = 1.0 / (r2 * np.sqrt(r2))
    one_minus = 1.0 - x @ x
    return INV_4PI * (-2.0 * (x @ iota) * inv3 - 3.0 * one_minus * (d @ iota) * inv3 / r2)


def poisson_abs_directional_numpy(x, iota, nodes, weights):
    """L1 norm of ``<grad_x P(x, .), iota>`` under the node weights."""
    return float(weights @ np.abs(poisson_directional_kernel_numpy(x, iota, nodes)))


@njit
def poisson_abs_directional_numba(x, iota, nodes, weights):
    one_minus = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
    xi = x[0] * iota[0] + x[1] * iota[1] + x[2] * iota[2]
    total = 0.0
    for i in range(nodes.shape[0]):
        d0 = x[0] - nodes[i, 0]
        d1 = x[1] - nodes[i, 1]
        d2 = x[2] - nodes[i, 2]
        r2 = d0 * d0 + d1 * d1 + d2 * d2
        inv3 = 1.0 / (r2 * math.sqrt(r2))
        di = d0 * iota[0] + d1 * iota[1] + d2 * iota[2]
        total += weights[i] * abs(-2.0 * xi * inv3 - 3.0 * one_minus * di * inv3 / r2)
    return total * INV_4PI


if USE_NUMBA:
    monomials = monomials_numba
    poisson_apply = poisson_apply_numba
    poisson_abs_directional = poisson_abs_directional_numba
else:
    monomials = monomials_numpy
    poisson_apply = poisson_apply_numpy
    poisson_abs_directional = poisson_abs_directional_numpy

poisson_directional_kernel = poisson_directional_kernel_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
