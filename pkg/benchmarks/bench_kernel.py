"""Compare the compiled and pure-Python polynomial kernels.

The package selects the compiled kernel automatically at import when it is
available (see nilpal.kernel.BACKEND).  This script times both
implementations on the same workloads: raw truncated products, and an
end-to-end commutator-chain computation that exercises the whole engine.

    python benchmarks/bench_kernel.py [--rank 3] [--step 5] [--reps 3]
"""

import argparse
import random
import time

from nilpal import _kernel_py, kernel
from nilpal.nilpotent import hall_basis, left_normed
from nilpal.words import word_from_ints

try:
    from nilpal import _speedups
except ImportError:
    _speedups = None


def rand_group_poly(rng, basis, length):
    poly = {0: 1}
    for _ in range(length):
        i = rng.randint(1, basis.n)
        factor = basis.gen_poly(i) if rng.random() < 0.5 else basis.geninv_poly(i)
        poly = basis.mul(poly, factor)
    return poly


def best_of(fn, reps):
    times = []
    for _ in range(reps):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_raw(basis, reps, pairs=200):
    rng = random.Random(0)
    basis._ensure_monos()
    table, m = basis._table, basis._mono_count
    polys = [rand_group_poly(rng, basis, 12) for _ in range(16)]
    work = [(polys[rng.randrange(16)], polys[rng.randrange(16)]) for _ in range(pairs)]

    results = {}
    impls = {"pure": _kernel_py.poly_mul}
    if _speedups is not None:
        impls["compiled"] = _speedups.poly_mul
    for name, mul in impls.items():
        results[name] = best_of(
            lambda mul=mul: [mul(a, b, table, m) for a, b in work], reps
        )
    return results


def bench_chains(basis, reps, chains=40):
    rng = random.Random(1)
    gens = [basis.generator(i) for i in range(1, basis.n + 1)]
    tuples = [
        [gens[rng.randrange(basis.n)] for _ in range(basis.k)] for _ in range(chains)
    ]

    def run():
        for tup in tuples:
            left_normed(tup)

    results = {}
    saved = kernel.poly_mul
    try:
        kernel.poly_mul = _kernel_py.poly_mul
        results["pure"] = best_of(run, reps)
        if _speedups is not None:
            kernel.poly_mul = _speedups.poly_mul
            results["compiled"] = best_of(run, reps)
    finally:
        kernel.poly_mul = saved
    return results


def report(title, results):
    print(f"\n{title}")
    for name in ("pure", "compiled"):
        if name in results:
            print(f"  {name:9s} {results[name] * 1000:9.2f} ms")
    if "compiled" in results and results["compiled"] > 0:
        print(f"  speedup   {results['pure'] / results['compiled']:9.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rank", type=int, default=3)
    parser.add_argument("--step", type=int, default=5)
    parser.add_argument("--reps", type=int, default=3)
    args = parser.parse_args()

    print(f"active backend: {kernel.BACKEND}")
    if _speedups is None:
        print("compiled kernel not built; timing the pure kernel only")
    basis = hall_basis(args.rank, args.step)
    report(f"raw truncated products (rank {args.rank}, step {args.step})",
           bench_raw(basis, args.reps))
    report(f"commutator chains (rank {args.rank}, step {args.step})",
           bench_chains(basis, args.reps))


if __name__ == "__main__":
    main()
