#!/usr/bin/env python3
"""Timings for the hot kernels: compiled extension vs NumPy fallback.

The surface recursion and the Pfaffian elimination run on matrices small
enough that interpreter and dispatch overhead dominates the NumPy
versions, which is exactly what the compiled twins remove.

Run:  python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from nhtopo import _kernels_py
from nhtopo.zoo import build_four_band_critical, build_trs_dagger

try:
    from nhtopo import _kernels_cy

    HAVE_COMPILED = hasattr(_kernels_cy, "dyson_iterate")
except ImportError:
    HAVE_COMPILED = False


def timeit(func, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_case(name, make_args, call, repeats):
    args = make_args()
    t_py = timeit(lambda: call(_kernels_py, *args), repeats)
    row = f"{name:42s} python {t_py * 1e3:9.3f} ms"
    if HAVE_COMPILED:
        t_cy = timeit(lambda: call(_kernels_cy, *args), repeats)
        row += f"   compiled {t_cy * 1e3:9.3f} ms   speedup {t_py / t_cy:6.1f}x"
    print(row)


def contiguous_blocks(model, omega):
    g_inv = np.ascontiguousarray(omega * np.eye(model.n_orbitals) - model.h)
    return g_inv, np.ascontiguousarray(model.v), np.ascontiguousarray(model.w)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    print(f"compiled kernels available: {HAVE_COMPILED}")

    critical = build_four_band_critical(c=0.3)
    trs = build_trs_dagger(1, 1, 1.2, -0.2)

    bench_case(
        "surface recursion, 4 orbitals, N=400",
        lambda: contiguous_blocks(critical, 0.5),
        lambda mod, gi, v, w: mod.dyson_iterate(gi, v, w, 400),
        args.repeats,
    )
    bench_case(
        "surface fixed point, 4 orbitals, tol=1e-13",
        lambda: contiguous_blocks(trs, 1e-6),
        lambda mod, gi, v, w: mod.dyson_converge(gi, v, w, 1e-13, 100_000),
        args.repeats,
    )
    rng = np.random.default_rng(0)
    for n in (8, 16, 32, 64):
        r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        skew = np.ascontiguousarray(r - r.T)
        bench_case(
            f"pfaffian elimination, n={n}",
            lambda skew=skew: (skew,),
            lambda mod, a: mod.pfaffian_skew(a),
            args.repeats,
        )


if __name__ == "__main__":
    main()
