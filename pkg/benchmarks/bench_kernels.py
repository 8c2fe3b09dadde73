"""Time each hot kernel under the compiled and the numpy backend.

    python3 benchmarks/bench_kernels.py [--quick] [--repeat R]
"""
import argparse
import importlib
import statistics
import time

import numpy as np

from pcl import _pykernels


def _time(fn, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def cases(mod, limit, conv_n, glue_n, scan_a):
    spf, s0, s1 = mod.sieve(limit)
    hs = mod.hooley_sums(s0, limit)
    s4 = (hs % 4).astype(np.int8)
    return {
        f"sieve({limit})": lambda: mod.sieve(limit),
        f"hooley_sums({limit})": lambda: mod.hooley_sums(s0, limit),
        f"divisor_convolution x100 (N~{conv_n})": lambda: [mod.divisor_convolution(s0, conv_n - 4 * i) for i in range(100)],
        f"glued_counts({glue_n})": lambda: mod.glued_counts(glue_n),
        f"residue_failures(16,14)": lambda: mod.residue_failures(s4, 16, 14, (limit - 14) // 16),
        f"first_failure all B, A<={scan_a}": lambda: [
            mod.first_failure(s4, a, b, limit) for a in range(2, scan_a + 1) for b in range(a)
        ],
    }


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--quick", action="store_true", help="small sizes, for a smoke run")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if args.quick:
        sizes = dict(limit=10**5, conv_n=10**4, glue_n=500, scan_a=50)
    else:
        sizes = dict(limit=10**7, conv_n=10**5, glue_n=2000, scan_a=300)

    backends = {"python": _pykernels}
    try:
        backends["cython"] = importlib.import_module("pcl._ckernels")
    except ImportError:
        print("compiled extension not built; timing the numpy backend only")

    timings = {}
    for name, mod in backends.items():
        for label, fn in cases(mod, **sizes).items():
            timings.setdefault(label, {})[name] = _time(fn, args.repeat)

    width = max(map(len, timings))
    print(f"{'kernel':<{width}}  {'python':>10}  {'cython':>10}  {'speedup':>8}")
    for label, t in timings.items():
        py, cy = t["python"], t.get("cython")
        cy_s = f"{cy:10.4f}" if cy is not None else f"{'-':>10}"
        sp = f"{py / cy:7.1f}x" if cy else f"{'-':>8}"
        print(f"{label:<{width}}  {py:10.4f}  {cy_s}  {sp}")


if __name__ == "__main__":
    main()
