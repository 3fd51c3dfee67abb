"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 1000 10000 100000] [--repeat 5]

Prints one row per (kernel, n) with the best-of-repeat time for each backend
and the speedup.  Results are checked for agreement before timing.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from luckmeter import _fallback

try:
    from luckmeter import _kernels
except ImportError:
    _kernels = None


def make_inputs(n: int, rng: np.random.Generator) -> dict[str, tuple]:
    # rounded scores give a realistic share of ties for the rank kernel
    scores = np.round(rng.normal(size=n), 2)
    labels = (rng.random(n) < 0.05).astype(np.uint8)
    labels[0], labels[-1] = 1, 0
    x = rng.normal(size=n)
    y = 0.3 * x + rng.normal(size=n)
    return {"midranks": (scores,), "sweep": (labels,), "pearson_sums": (x, y)}


def check_agreement(name: str, args: tuple) -> None:
    a = getattr(_fallback, name)(*args)
    b = getattr(_kernels, name)(*args)
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    for u, v in zip(a, b):
        np.testing.assert_allclose(np.asarray(u, dtype=float), np.asarray(v, dtype=float),
                                   rtol=1e-12, equal_nan=True)


def best_time(fn, args: tuple, repeat: int) -> float:
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 100_000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(args.seed)
    header = f"{'kernel':<14}{'n':>9}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        for name, inputs in make_inputs(n, rng).items():
            check_agreement(name, inputs)
            slow = best_time(getattr(_fallback, name), inputs, args.repeat)
            fast = best_time(getattr(_kernels, name), inputs, args.repeat)
            print(f"{name:<14}{n:>9}{slow * 1e3:>14.3f}{fast * 1e3:>14.3f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
