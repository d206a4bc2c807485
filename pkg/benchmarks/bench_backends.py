#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the 2-D right-hand side and a fixed-horizon advance on identical
fields, printing per-call times and the speedup.  Run with

    python benchmarks/bench_backends.py [--nr 64] [--ntheta 64]

Works regardless of CONEFLOW_BACKEND: both implementations are invoked
directly.
"""

import argparse
import time

import numpy as np

from coneflow.cone import ConeSpec
from coneflow.mesh import build_mesh
from coneflow.kernels import numpy_impl as npk

try:
    from coneflow.kernels import numba_impl as nbk
except ImportError:
    nbk = None


def timeit(fn, repeat):
    fn()                      # warm up (and JIT-compile)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nr", type=int, default=64)
    ap.add_argument("--ntheta", type=int, default=64)
    ap.add_argument("--t-advance", type=float, default=0.02,
                    dest="t_advance")
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()

    mesh = build_mesh(ConeSpec.round(0.5), args.nr, args.ntheta)
    u = (1.0 + 0.08 * np.cos(np.pi * mesh.sigma)[:, None]
         * np.ones((1, args.ntheta))
         + 0.02 * np.cos(2 * mesh.theta)[None, :]
         * (mesh.sigma ** 2)[:, None])
    ghost, virt = npk.closure_2d(u, mesh.gcoef, mesh.wv)

    rows = []

    def np_rhs():
        npk.rhs_2d(2, u, ghost, virt, mesh.dsig, mesh.dth, mesh.geo(),
                   mesh.kappa_theta)

    t_np = timeit(np_rhs, args.repeat)
    rows.append(("rhs", "numpy", t_np))

    if nbk is not None:
        out = np.empty_like(u)
        hr = np.empty_like(u)
        rowd = np.empty(mesh.nr)
        rowok = np.empty(mesh.nr, dtype=np.bool_)

        def nb_rhs():
            nbk.rhs_2d(2, u, ghost, virt, mesh.dsig, mesh.dth,
                       *mesh.geo(), mesh.kappa_theta, out, hr, rowd, rowok)

        t_nb = timeit(nb_rhs, args.repeat)
        rows.append(("rhs", "numba", t_nb))

    def np_adv():
        npk.advance_2d(u, 0.0, args.t_advance, 2, mesh.dsig, mesh.dth,
                       mesh.geo(), mesh.gcoef, mesh.wv, mesh.filt,
                       mesh.n_filt, mesh.kappa_theta, 0.4, 1e-13, 1e9, 10)

    t_np_adv = timeit(np_adv, max(1, args.repeat // 100))
    rows.append((f"advance to t={args.t_advance}", "numpy", t_np_adv))

    if nbk is not None:
        def nb_adv():
            nbk.advance_2d(u.copy(), 0.0, args.t_advance, 2, mesh.dsig,
                           mesh.dth, *mesh.geo(), mesh.gcoef, mesh.wv,
                           mesh.filt, mesh.n_filt, mesh.kappa_theta,
                           0.4, 1e-13, 1e9, 10)

        t_nb_adv = timeit(nb_adv, max(1, args.repeat // 100))
        rows.append((f"advance to t={args.t_advance}", "numba", t_nb_adv))

    print(f"mesh {args.nr} x {args.ntheta}")
    print(f"{'kernel':<24} {'backend':<8} {'time':>12}")
    for name, backend, t in rows:
        print(f"{name:<24} {backend:<8} {t * 1e3:>10.3f} ms")
    if nbk is not None:
        print(f"\nspeedup rhs:     {t_np / t_nb:6.1f}x")
        print(f"speedup advance: {t_np_adv / t_nb_adv:6.1f}x")
    else:
        print("\nnumba unavailable; fallback only")


if __name__ == "__main__":
    main()
