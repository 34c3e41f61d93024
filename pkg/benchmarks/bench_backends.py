#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times tree growth and rasterization on both backends, checks they agree
bit-for-bit, and prints a comparison table.

    python3 benchmarks/bench_backends.py --depths 14,16,18,20 --repeat 3
"""

import argparse
import math
import time

import numpy as np

from fractree import TreeParams, base_quad, derive_transforms
from fractree.backend import get_kernels
from fractree.generator import _kernel_args, grow
from fractree.render import RenderConfig, to_canvas


def time_call(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_grow(backends, depths, repeat):
    print(f"{'grow':<14}{'quads':>12}" + "".join(f"{n:>12}" for n in backends)
          + f"{'speedup':>10}")
    for depth in depths:
        p = TreeParams(e=5, b=1.618, branching_angle=math.radians(67), v=1,
                       depth=depth, seed=7)
        t = derive_transforms(p)
        args = (base_quad(p.e).xy, p.depth, 0, 1, p.seed, p.flip_prob,
                *_kernel_args(p, t))
        times, outputs = {}, {}
        for name in backends:
            times[name], outputs[name] = time_call(
                lambda k=get_kernels(name): k.grow_block(*args), repeat
            )
        if len(backends) == 2:
            a, b = (outputs[n] for n in backends)
            assert np.array_equal(a[0], b[0]), "backends disagree on geometry"
            ratio = f"{times['fallback'] / times['cython']:9.1f}x"
        else:
            ratio = "        -"
        n = 2 ** (depth + 1) - 1
        print(f"  depth {depth:<7}{n:>12,}"
              + "".join(f"{times[name]:>11.3f}s" for name in backends) + ratio)


def bench_raster(backends, depths, repeat, size):
    print(f"\n{'rasterize':<14}{'quads':>12}" + "".join(f"{n:>12}" for n in backends)
          + f"{'speedup':>10}")
    cfg = RenderConfig(width=size, height=size)
    for depth in depths:
        p = TreeParams(e=5, b=1.618, branching_angle=math.radians(67), v=1,
                       depth=depth, seed=7)
        g = grow(p)
        quads = np.ascontiguousarray(to_canvas(g.xy, g, cfg))
        colors = np.zeros((g.n_quads, 3), dtype=np.uint8)
        colors[:, 1] = (g.depths * (255 // max(1, depth))).astype(np.uint8)
        times, images = {}, {}
        for name in backends:
            kern = get_kernels(name)

            def run(k=kern):
                img = np.full((size, size, 3), 255, np.uint8)
                k.fill_quads(img, quads, colors)
                return img

            times[name], images[name] = time_call(run, repeat)
        if len(backends) == 2:
            a, b = (images[n] for n in backends)
            assert np.array_equal(a, b), "backends disagree on pixels"
            ratio = f"{times['fallback'] / times['cython']:9.1f}x"
        else:
            ratio = "        -"
        print(f"  depth {depth:<7}{g.n_quads:>12,}"
              + "".join(f"{times[name]:>11.3f}s" for name in backends) + ratio)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depths", default="12,14,16,18",
                        help="comma-separated growth depths")
    parser.add_argument("--raster-depths", default="8,10,12",
                        help="comma-separated depths for the raster benchmark")
    parser.add_argument("--size", type=int, default=1024,
                        help="raster canvas size")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["cython", "fallback"]
    try:
        get_kernels("cython")
    except ImportError:
        print("compiled extension not available; timing fallback only")
        backends = ["fallback"]

    depths = [int(d) for d in args.depths.split(",")]
    raster_depths = [int(d) for d in args.raster_depths.split(",")]
    bench_grow(backends, depths, args.repeat)
    bench_raster(backends, raster_depths, args.repeat, args.size)


if __name__ == "__main__":
    main()
