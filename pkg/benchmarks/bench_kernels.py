"""Time the numba and pure-numpy variants of each hot kernel.

Run with ``python3 benchmarks/bench_kernels.py``. Results of both variants
are compared before timing, so a mismatch aborts the run.
"""

import argparse
import timeit

import numpy as np

from splab import kernels
from splab._accel import USE_NUMBA
from splab.multiindex import enumerate_up_to
from splab.poisson import SphereGrid


def cases(rng):
    z = rng.standard_normal((4096, 3)) + 1j * rng.standard_normal((4096, 3))
    exps = np.array([a.exponents for a in enumerate_up_to(3, 8)], dtype=np.int64)
    grid = SphereGrid(256, 512)
    x = np.array([0.1, -0.2, 0.4])
    iota = np.array([0.0, 0.6, 0.8])
    values = np.ascontiguousarray(grid.nodes[:, :2] ** 2)
    return {
        "monomials (4096 pts, 165 exps)": (kernels.monomials_numpy, kernels.monomials_numba, (z, exps)),
        "poisson_apply (131k nodes, nu=2)": (
            kernels.poisson_apply_numpy, kernels.poisson_apply_numba, (x, grid.nodes, grid.weights, values)),
        "poisson_abs_directional (131k nodes)": (
            kernels.poisson_abs_directional_numpy, kernels.poisson_abs_directional_numba,
            (x, iota, grid.nodes, grid.weights)),
    }


def _close(a, b):
    if isinstance(a, tuple):
        return all(_close(u, v) for u, v in zip(a, b))
    return np.allclose(a, b, rtol=1e-10, atol=1e-12)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not USE_NUMBA:
        print("numba disabled (SPLAB_DISABLE_NUMBA set or numba missing); timings compare numpy with itself")
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, (slow, fast, inputs) in cases(rng).items():
        if not _close(slow(*inputs), fast(*inputs)):  # also warms up the jit
            raise SystemExit(f"{name}: variants disagree")
        t_np = min(timeit.repeat(lambda: slow(*inputs), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: fast(*inputs), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:40s} {t_np:10.2f} {t_nb:10.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
