"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on identical inputs in both backends; the table lists the
best wall time per backend, the speedup and the largest relative difference
between the two outputs.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from oscillorm import _pykernels

try:
    from oscillorm import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    x = np.sort(rng.random(2000))
    y = np.sort(rng.random(2000))
    c = rng.standard_normal(2000) + 1j * rng.standard_normal(2000)
    a = rng.standard_normal(1500) + 1j * rng.standard_normal(1500)
    b = rng.standard_normal(1500) + 1j * rng.standard_normal(1500)
    u = np.sort(rng.random(1500))
    s = np.linspace(0.0, 1.0, 20001)
    ws = np.full(s.size, 1.0 / (s.size - 1))
    rho = np.linspace(0.0, 1e-3, 6)
    wrho = np.full(6, 1e-3 / 6)
    return {
        "nudft 2000x2000": lambda m: m.nudft(x, y, 500.0, c),
        "bilinear lorentz 1500^2": lambda m: m.bilinear_sum(a, u, b, u, 3, 256.0),
        "bilinear w 1500^2": lambda m: m.bilinear_sum(a, u, b, u, 1, 256.0),
        "duhamel n=2 20001x6": lambda m: m.duhamel_sum(s, ws, 2.5, 512.0, 128.0, 2, rho, wrho, 0.0),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, call in cases(rng).items():
        t_py = min(timeit.repeat(lambda: call(_pykernels), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:28s} {t_py:11.4f}")
            continue
        t_c = min(timeit.repeat(lambda: call(_ckernels), number=1, repeat=args.repeat))
        ref, got = np.asarray(call(_pykernels)), np.asarray(call(_ckernels))
        diff = float(np.max(np.abs(got - ref)) / np.max(np.abs(ref)))
        print(f"{name:28s} {t_py:11.4f} {t_c:11.4f} {t_py / t_c:8.2f} {diff:13.2e}")


if __name__ == "__main__":
    main()
