"""Compare the compiled and numpy kernel backends.

Times the three filter-bank kernels on a (T, P) batch, the per-voxel
iterative extraction, and the compiled-operator path, for every available
backend. Run with ``python benchmarks/bench_backends.py [--T 128 --P 2000]``.
"""

import argparse
import time

import numpy as np

from wavefeat import D4, _backend
from wavefeat.operator import ScaleMask, apply_operator, build_operator, extract_iterative


def best_of(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(T, P, reps, refilter):
    rng = np.random.default_rng(0)
    V = rng.standard_normal((T, P))
    half = np.ascontiguousarray(V[: T // 2])
    h = np.ascontiguousarray(D4.lowpass_dec)
    mask = ScaleMask.parse("r2,r3", 3)
    n_voxels = min(P, 500)
    rows, outputs = [], {}
    for name in _backend.available():
        prev = _backend.set_backend(name)
        try:
            k = _backend.kernels
            per_voxel = best_of(lambda: [extract_iterative(V[:, p], D4, mask, refilter)
                                         for p in range(n_voxels)], reps) / n_voxels
            outputs[name] = extract_iterative(V[:, :n_voxels], D4, mask, refilter)
            rows.append((name,
                         1e3 * best_of(lambda: k.cconv(V, h, 0), reps),
                         1e3 * best_of(lambda: k.conv_down(V, h), reps),
                         1e3 * best_of(lambda: k.up_conv(half, h, 3), reps),
                         1e6 * per_voxel,
                         1e3 * best_of(lambda: build_operator(D4, mask, refilter, T), reps)))
        finally:
            _backend.set_backend(prev)
    op = build_operator(D4, mask, refilter, T)
    apply_ms = 1e3 * best_of(lambda: apply_operator(op, V), reps)

    print(f"T={T} P={P} reps={reps} refilter={'on' if refilter else 'off'} keep={mask.describe()}")
    print(f"{'backend':<8}{'cconv_ms':>10}{'conv_down_ms':>14}{'up_conv_ms':>12}"
          f"{'us/voxel':>10}{'build_ms':>10}")
    for r in rows:
        print(f"{r[0]:<8}{r[1]:>10.3f}{r[2]:>14.3f}{r[3]:>12.3f}{r[4]:>10.1f}{r[5]:>10.3f}")
    print(f"matrix apply for all {P} voxels: {apply_ms:.3f} ms")
    if len(outputs) == 2:
        diff = np.max(np.abs(outputs["native"] - outputs["python"]))
        print(f"max |native - python| on {n_voxels} voxels: {diff:.2e}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--T", type=int, default=128)
    parser.add_argument("--P", type=int, default=2000)
    parser.add_argument("--reps", type=int, default=3)
    parser.add_argument("--refilter", choices=("on", "off"), default="off")
    args = parser.parse_args()
    run(args.T, args.P, args.reps, args.refilter == "on")


if __name__ == "__main__":
    main()
