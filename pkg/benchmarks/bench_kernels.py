"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each row times one kernel call on the same input for both backends and
reports how closely the results agree.
"""
import argparse
import time

import numpy as np

from permest import _fallback

try:
    from permest import _kernels
except ImportError:  # extension not built
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(rng):
    a20 = np.ascontiguousarray(rng.random((20, 20)))
    a16i = np.ascontiguousarray(rng.integers(0, 4, (16, 16)), dtype=np.int64)
    stack = np.ascontiguousarray(rng.standard_normal((4096, 10, 10)))
    r = rng.standard_normal((14, 14, 14))
    q = np.ascontiguousarray(r @ r.transpose(0, 2, 1))
    return [
        ("ryser_float n=20", "ryser_float", (a20,)),
        ("ryser_int n=16", "ryser_int", (a16i,)),
        ("batch_logdet 4096 x 10x10", "batch_logdet_parts", (stack,)),
        ("mixdisc incl-excl n=14", "mixdisc_inclusion_exclusion", (q,)),
    ]


def rel_diff(x, y):
    if isinstance(x, tuple):
        same = all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(x, y))
        return "bitwise" if same else "differ"
    # alternating sums cancel, so agreement degrades with n
    return f"{abs(x - y) / abs(x):.1e}"


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation`")

    print(f"{'kernel':<28}{'cython [s]':>12}{'python [s]':>12}{'speedup':>10}  rel diff")
    for label, name, inputs in cases(np.random.default_rng(args.seed)):
        tc, rc = best_of(lambda: getattr(_kernels, name)(*inputs), args.repeat)
        tp, rp = best_of(lambda: getattr(_fallback, name)(*inputs), args.repeat)
        print(f"{label:<28}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x  {rel_diff(rc, rp)}")


if __name__ == "__main__":
    main()
