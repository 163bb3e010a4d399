"""Benchmark: numba kernels vs their pure-numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times GF(2) rank, echelon reduction, and truncated group-ring word
application on inputs drawn from the pentagon, and checks that both
backends return identical results.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from racglie import _kernels
from racglie.complexes import catalog
from racglie.coxeter import TruncatedRing, nested_word


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_rank(rng, repeat):
    mat = rng.integers(0, 2**63, size=(400, 8), dtype=np.uint64)
    rows = []
    for name, fn in (("numpy", _kernels.np_rank), ("numba", getattr(_kernels, "nb_rank", None))):
        if fn is None:
            continue
        fn(mat.copy())  # warm up / compile
        t, r = _time(lambda: fn(mat.copy()), repeat)
        rows.append((f"rank 400x512", name, t, r))
    return rows


def bench_apply(repeat):
    K = catalog("pentagon")
    ring = TruncatedRing(K, 6, "Z")
    word = np.asarray(nested_word((1, 2, 1, 3), 5, K) * 4, dtype=np.int64)
    rows = []
    for name, fn in (("numpy", _kernels.np_apply_word), ("numba", getattr(_kernels, "nb_apply_word", None))):
        if fn is None:
            continue
        args = (ring.one(), word, ring.nxt, ring.absorb, ring.factor, ring.modulus)
        fn(*args)
        t, r = _time(lambda: fn(*args), repeat)
        rows.append((f"apply_word len={len(word)} basis={len(ring)}", name, t, int(r.sum())))
    return rows


def bench_reduce(rng, repeat):
    nrows, nw = 300, 6
    rows_ = np.zeros((nrows, nw), dtype=np.uint64)
    pivots = np.arange(nrows, dtype=np.int64)
    for r in range(nrows):
        rows_[r] = rng.integers(0, 2**63, size=nw, dtype=np.uint64)
        # make row r have lowest set bit at column r
        w, b = divmod(r, 64)
        rows_[r, :w] = 0
        rows_[r, w] &= ~np.uint64((1 << b) - 1)
        rows_[r, w] |= np.uint64(1 << b)
    prov = np.zeros((nrows, 5), dtype=np.uint64)
    v = rng.integers(0, 2**63, size=nw, dtype=np.uint64)
    out = []
    for name, fn in (("numpy", _kernels.np_reduce), ("numba", getattr(_kernels, "nb_reduce", None))):
        if fn is None:
            continue

        def go():
            vv, pp = v.copy(), np.zeros(5, dtype=np.uint64)
            return fn(rows_, prov, pivots, nrows, vv, pp)

        go()
        t, r = _time(go, repeat)
        out.append(("reduce 300 rows", name, t, r))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(42)
    print(f"numba available: {_kernels.HAS_NUMBA} (active backend: {_kernels.BACKEND})")
    rows = bench_rank(rng, args.repeat) + bench_reduce(rng, args.repeat) + bench_apply(args.repeat)
    print(f"{'kernel':<38} {'backend':<7} {'best s':>10}  result")
    by_kernel: dict[str, list] = {}
    for kernel, backend, t, r in rows:
        print(f"{kernel:<38} {backend:<7} {t:>10.5f}  {r}")
        by_kernel.setdefault(kernel, []).append((backend, t, r))
    for kernel, entries in by_kernel.items():
        if len(entries) == 2:
            (_, tn, rn), (_, tb, rb) = entries
            agree = "agree" if rn == rb else "DISAGREE"
            print(f"  {kernel}: speedup x{tn / max(tb, 1e-9):.1f}, results {agree}")


if __name__ == "__main__":
    main()
