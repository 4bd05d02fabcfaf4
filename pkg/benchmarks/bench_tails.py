"""Time the tail-sum kernel with numba and with the numpy fallback.

    python benchmarks/bench_tails.py [--repeat 3]

Both backends run the same accelerated tail sums for the Abel series
sin(k x)/k at x = 1/n; the script prints per-horizon timings, the speedup and
the largest disagreement between the two backends.
"""

import argparse
import time

from bcontinuum import expr as E
from bcontinuum._kernels import TermKernel, numba
from bcontinuum.analysis.sumthm import tail_sum

HORIZONS = (16, 64, 256, 1024)


def _time(kernel, n, repeat):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = tail_sum(kernel, 1.0 / n, n).value
        best = min(best, time.perf_counter() - t0)
    return best, value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--term", default="sin(k*x)/k")
    args = ap.parse_args()

    term = E.parse(args.term, variables={"k", "x"})
    fallback = TermKernel(term, use_numba=False)
    fast = TermKernel(term, use_numba=True) if numba is not None else None
    if fast is not None:
        t0 = time.perf_counter()
        fast.advance(0.5, 0.0, 1, 10)
        print(f"numba compile: {time.perf_counter() - t0:.2f}s")
    else:
        print("numba not installed; timing the numpy fallback only")

    print(f"{'n':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8} {'|diff|':>10}")
    worst = 0.0
    for n in HORIZONS:
        t_np, v_np = _time(fallback, n, args.repeat)
        if fast is None:
            print(f"{n:>6} {t_np:>10.4f} {'-':>10} {'-':>8} {'-':>10}")
            continue
        t_nb, v_nb = _time(fast, n, args.repeat)
        diff = abs(v_np - v_nb)
        worst = max(worst, diff)
        print(f"{n:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f} {diff:>10.2e}")
    if fast is not None:
        print(f"max backend disagreement: {worst:.2e}")


if __name__ == "__main__":
    main()
