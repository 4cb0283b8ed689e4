"""Compiled kernels against the numpy fallback on the hot max-times loops.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from commoneig import _fallback

try:
    from commoneig import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    for n in (4, 8, 16, 64):
        A = 2.0 ** rng.integers(-3, 4, (n, n)) * (rng.random((n, n)) > 0.3)
        B = 2.0 ** rng.integers(-3, 4, (n, n))
        x = 2.0 ** rng.integers(-3, 4, n)
        G = np.asfortranarray(B[:, : max(2, n // 2)])
        with np.errstate(divide="ignore"):
            L = np.where(A > 0, np.log2(np.where(A > 0, A, 1)), -np.inf)
        yield n, {
            "matvec": lambda m, A=A, x=x: m.mt_matvec(A, x),
            "matmul": lambda m, A=A, B=B: m.mt_matmul(A, B),
            "residual": lambda m, x=x, y=B[:, 0].copy(): m.mt_residual(x, y),
            "project": lambda m, G=G, x=x: m.mt_project(G, x),
            "karp": lambda m, L=L: m.karp_tables(L),
        }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernels not built; only the fallback is available")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<10}{'n':>4}{'cython us':>12}{'numpy us':>12}{'speedup':>9}")
    for n, ops in cases(rng):
        for name, op in ops.items():
            number = 2000 if n <= 16 else 50
            t = {}
            for label, mod in (("cy", _kernels), ("py", _fallback)):
                best = min(timeit.repeat(lambda: op(mod), number=number, repeat=args.repeat))
                t[label] = best / number * 1e6
            print(f"{name:<10}{n:>4}{t['cy']:>12.2f}{t['py']:>12.2f}{t['py'] / t['cy']:>8.1f}x")


if __name__ == "__main__":
    main()
