"""Timing comparison of the compiled kernels against the pure-Python
fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import math
import timeit

import numpy as np

from obspath import _kernels_py

try:
    from obspath import _fastkern
except ImportError:
    _fastkern = None

N_GRID = 1000
REPEAT = 5


def make_inputs():
    rng = np.random.default_rng(0)
    bound = math.radians(5.0)
    u = rng.uniform(-bound, bound, N_GRID)
    h = 100.0 / N_GRID
    return u, h


def bench(label, kernels, u, h):
    args = (1, 1, 5.0, 0.0, 0.0, u, h, 0.04, 1e-12)
    states = kernels.forward(*args)

    def fwd():
        kernels.forward(*args)

    def grad():
        kernels.adjoint_gradient(1, 1, states, u, h, 0.04)

    for name, fn in (("forward", fwd), ("gradient", grad)):
        number = 20 if kernels is _kernels_py else 1000
        best = min(timeit.repeat(fn, number=number, repeat=REPEAT)) / number
        print(f"{label:>8} {name:>9}: {best * 1e6:10.1f} us/call")
    return states


def main():
    u, h = make_inputs()
    ref = bench("python", _kernels_py, u, h)
    if _fastkern is None:
        print("compiled backend unavailable; nothing to compare")
        return
    fast = bench("cython", _fastkern, u, h)
    print("bit-identical states:", np.array_equal(ref, fast))


if __name__ == "__main__":
    main()
