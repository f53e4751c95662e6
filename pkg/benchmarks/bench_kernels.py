"""Time the numba and numpy flavours of each hot kernel and check they agree.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both flavours are importable regardless of FRACHEAT_DISABLE_NUMBA; the
variable only selects which one the library uses.
"""

import argparse
import math
import timeit

import numpy as np
from scipy import ndimage

from fracheat import _kernels
from fracheat._accel import HAVE_NUMBA
from fracheat._quad import _leggauss, composite_rule, doubly_graded_breaks, geometric_breaks


def _cases():
    gx, gw = _leggauss(16)
    rho = np.linspace(0.05, 400.0, 2000)
    yield "rect_density", (rho, 1.0, 0.6, gx, gw)

    d, dw = composite_rule(geometric_breaks(0.0, 1.0, 48, 0.5), 16)
    th, thw = composite_rule(geometric_breaks(0.0, math.pi, 48, 0.5), 16)
    yield "disk_inside", (d, dw, th, thw, 1.0, 0.05, 0.5, 0)

    d2, dw2 = composite_rule(geometric_breaks(0.0, 16.0, 48, 0.5), 16)
    u, uw = composite_rule(doubly_graded_breaks(0.0, 1.0, 48, 0.5), 16)
    yield "disk_outside", (d2, dw2, u, uw, 1.0, 0.05)

    N = 512
    x = (np.arange(N) + 0.5) / N * 8.0 - 4.0
    X, Y = np.meshgrid(x, x, indexing="ij")
    chi = (X * X + Y * Y < 1.0).astype(float)
    f = np.ascontiguousarray(ndimage.gaussian_filter(chi, 1.5, mode="wrap"))
    yield "contour_length", (f, 0.5, 8.0 / N)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy flavour can run")
    print(f"{'kernel':<16}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, call_args in _cases():
        fn_numpy = getattr(_kernels, f"{name}_numpy")
        fn_numba = getattr(_kernels, f"{name}_numba")
        ref = np.asarray(fn_numpy(*call_args))
        t_np = min(timeit.repeat(lambda: fn_numpy(*call_args), number=1, repeat=args.repeat))
        if HAVE_NUMBA:
            got = np.asarray(fn_numba(*call_args))  # first call compiles
            t_nb = min(timeit.repeat(lambda: fn_numba(*call_args), number=1, repeat=args.repeat))
            diff = float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-300)))
            print(f"{name:<16}{1e3 * t_nb:>12.2f}{1e3 * t_np:>12.2f}{t_np / t_nb:>10.1f}{diff:>15.2e}")
        else:
            print(f"{name:<16}{'-':>12}{1e3 * t_np:>12.2f}{'-':>10}{'-':>15}")


if __name__ == "__main__":
    main()
