"""Compare the compiled and numpy backends on the sign-pattern kernel.

    python3 benchmarks/bench_kernels.py [--n 14] [--dim 64] [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from twistlab import _kernels_py, kernels


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[8, 12, 14])
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    try:
        from twistlab import _kernels as compiled
    except ImportError:
        compiled = None
        print("compiled extension not built; timing the numpy backend only")
    rng = np.random.default_rng(0)
    print(f"{'n':>3} {'patterns':>9} {'numpy s':>10} {'cython s':>10} {'speedup':>8} {'max diff':>10}")
    for n in args.n:
        X = rng.standard_normal((n, args.dim))
        run_py = lambda: kernels.kp_defects_exhaustive(X, backend=_kernels_py)
        t_py = min(timeit.repeat(run_py, number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{n:>3} {2 ** n:>9} {t_py:>10.4f}")
            continue
        run_c = lambda: kernels.kp_defects_exhaustive(X, backend=compiled)
        t_c = min(timeit.repeat(run_c, number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(run_py() - run_c())))
        print(f"{n:>3} {2 ** n:>9} {t_py:>10.4f} {t_c:>10.4f} {t_py / t_c:>8.2f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
