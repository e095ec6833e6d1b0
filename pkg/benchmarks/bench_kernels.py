"""Compare the numba and pure-numpy float kernels.

    python3 benchmarks/bench_kernels.py [--sizes 4 16 64 256] [--repeat 20]

Numba compile time is excluded: each jitted kernel is called once before timing.
"""

import argparse
import timeit

import numpy as np

from fibcirc import _kernels


def best_of(fn, arg, repeat):
    return min(timeit.repeat(lambda: fn(arg), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 12, 32, 64, 128, 256])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; timing the numpy kernels only")
    rng = np.random.default_rng(args.seed)
    kernels = [
        ("dft", _kernels.dft_eigenvalues_numpy, _kernels.dft_eigenvalues_numba, lambda n: rng.normal(size=n)),
        ("det", _kernels.pivoted_det_numpy, _kernels.pivoted_det_numba, lambda n: rng.normal(size=(n, n))),
    ]
    print(f"{'kernel':<6} {'n':>5} {'numpy us':>11} {'numba us':>11} {'speedup':>8}")
    for name, np_fn, nb_fn, make in kernels:
        if nb_fn is not None:
            nb_fn(make(2))
        for n in args.sizes:
            data = make(n)
            t_np = best_of(np_fn, data, args.repeat)
            if nb_fn is None:
                print(f"{name:<6} {n:>5} {t_np * 1e6:>11.1f} {'-':>11} {'-':>8}")
                continue
            t_nb = best_of(nb_fn, data, args.repeat)
            print(f"{name:<6} {n:>5} {t_np * 1e6:>11.1f} {t_nb * 1e6:>11.1f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
