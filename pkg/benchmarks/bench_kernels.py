"""Compare the compiled and pure-Python evaluation kernels.

Each case builds evaluation-matrix rows (all d! words on random basis tuples),
checks that both backends return identical arrays, and reports the best of
``--repeat`` timings.

    python3 benchmarks/bench_kernels.py --repeat 3
"""

import argparse
import random
import time

import numpy as np

from rsymwitt import kernels
from rsymwitt.freealg import multilinear_monomials, random_tuples
from rsymwitt.witt import WittAlgebra

CASES = [
    ("W1 laurent, d=3", WittAlgebra.laurent(1), 3, 2000),
    ("W1 poly, d=5", WittAlgebra.poly(1), 5, 500),
    ("W2 poly, d=5", WittAlgebra.poly(2), 5, 300),
    ("W(1;1) p=7, d=4", WittAlgebra.divpow(7, (1,)), 4, 500),
    ("W2 poly, d=7", WittAlgebra.poly(2), 7, 20),
]


def prepare(alg, d, count, seed):
    window = alg.default_window()
    elems = sorted(window)
    index = {k: e for e, k in enumerate(elems)}
    exp, dirs = kernels.encode_elements(elems, alg.n)
    rng = random.Random(seed)
    tuples = [[index[k] for k in t] for t in random_tuples(rng, window, d, count)]
    words = [tuple(v - 1 for v in w) for w in multilinear_monomials(d)]
    return kernels.Encoding(alg.domain), words, exp, dirs, tuples


def best_time(fn, repeat):
    best, out = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true", help="skip the largest case")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is timed")
    previous = kernels.backend()
    header = f"{'case':<18} {'rows':>8} " + " ".join(f"{b + ' (s)':>12}" for b in backends)
    print(header + ("   speedup" if len(backends) > 1 else ""))
    try:
        for label, alg, d, count in CASES[:-1] if args.quick else CASES:
            enc, words, exp, dirs, tuples = prepare(alg, d, count, args.seed)
            times, outs = {}, {}
            for b in backends:
                kernels.set_backend(b)
                times[b], outs[b] = best_time(lambda: kernels.left_rows(enc, words, exp, dirs, tuples), args.repeat)
            ref = outs[backends[0]]
            for b in backends[1:]:
                if not all(np.array_equal(x, y) for x, y in zip(ref, outs[b])):
                    raise SystemExit(f"{label}: backends disagree")
            line = f"{label:<18} {len(ref[0]) - 1:>8} " + " ".join(f"{times[b]:>12.4f}" for b in backends)
            if len(backends) > 1:
                line += f"   {times['python'] / times['cython']:>6.1f}x"
            print(line)
    finally:
        kernels.set_backend(previous)


if __name__ == "__main__":
    main()
