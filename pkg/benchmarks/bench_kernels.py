#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the numpy fallback.

Times the batch retarded solve and the shell-potential accumulation on a
representative hyperbolic-shell workload and reports the speedup plus the
worst cross-backend deviation.

    python benchmarks/bench_kernels.py [--points 20000] [--nodes-theta 16]
"""

import argparse
import time

import numpy as np

from worldtube import spacetime as st
from worldtube._kernels import backends
from worldtube.tube import sphere_quadrature
from worldtube.worldline import UniformWorldline


def workload(n_points, n_theta, n_phi, seed=123):
    rng = np.random.default_rng(seed)
    w = UniformWorldline(np.zeros(4), st.E_T, st.E_X, 1.0)
    quad = sphere_quadrature(w.u, w.n, n_theta, n_phi)
    X = np.column_stack([
        rng.uniform(-1.0, 1.0, n_points),
        rng.uniform(1.5, 4.0, n_points),
        rng.uniform(-1.5, 1.5, n_points),
        rng.uniform(-1.5, 1.5, n_points),
    ])
    return w, quad, X


def bench(fn, repeat=3):
    best = np.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--nodes-theta", type=int, default=16)
    parser.add_argument("--nodes-phi", type=int, default=32)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    mods = backends()
    if "compiled" not in mods:
        print("compiled backend not built; benchmarking fallback only")
    w, quad, X = workload(args.points, args.nodes_theta, args.nodes_phi)
    base = w.x0 - w.n / w.accel

    print(f"workload: {args.points} field points, "
          f"{len(quad)} sphere nodes, accel = {w.accel}")
    print(f"{'kernel':<28}{'backend':<12}{'best time':>12}{'rate':>18}")

    results = {}
    for name, mod in mods.items():
        t, out = bench(
            lambda m=mod: m.retarded_canonical(base, w.u, w.n, w.accel, 1.0, X),
            args.repeat,
        )
        results[("retarded", name)] = (t, out[0])
        rate = args.points / t
        print(f"{'retarded_canonical':<28}{name:<12}{t:>10.4f} s{rate:>12.3g}/s")

    for name, mod in mods.items():
        t, out = bench(
            lambda m=mod: m.shell_potential_batch(
                w.x0, w.u, w.n, w.accel, 0.1, 1.0, 1.0 / (4 * np.pi),
                quad.nodes, quad.weights, X,
            ),
            args.repeat,
        )
        results[("shell", name)] = (t, out[0])
        rate = args.points * len(quad) / t
        print(f"{'shell_potential_batch':<28}{name:<12}{t:>10.4f} s{rate:>12.3g}/s")

    if "compiled" in mods:
        for key in ("retarded", "shell"):
            tc = results[(key, "compiled")]
            tf = results[(key, "fallback")]
            dev = float(np.nanmax(np.abs(tc[1] - tf[1])))
            print(f"{key}: speedup x{tf[0] / tc[0]:.2f}, "
                  f"max cross-backend deviation {dev:.3e}")


if __name__ == "__main__":
    main()
