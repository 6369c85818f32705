"""Compare the compiled DP kernel against the pure-Python fallback.

Two workloads: raw single-rectangle solves (kernel throughput) and full
document alignment (the anchored many-small-rectangles regime the kernel
was built for). Prints one table per workload.

Usage: python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from anchalign import kernels
from anchalign.costs import BeadEvaluator, shape_table
from anchalign.dp import align_documents, dp_segment
from anchalign.embeddings import SentenceDoc


def unit_rows(rng, n, dim):
    m = rng.normal(size=(n, dim))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def make_pair(rng, n, dim=128, noise=0.2):
    src = unit_rows(rng, n, dim)
    tgt = src + noise * unit_rows(rng, n, dim)
    tgt /= np.linalg.norm(tgt, axis=1, keepdims=True)
    return src, tgt


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def available_kernels():
    named = [("python", kernels.python_kernel)]
    if kernels.HAVE_COMPILED:
        named.append(("compiled", kernels.compiled_kernel))
    return named


def print_table(title, rows):
    print(f"\n{title}")
    header = f"{'case':>12} | {'python':>10} | {'compiled':>10} | {'speedup':>7}"
    print(header)
    print("-" * len(header))
    for case, times in rows:
        py = times.get("python")
        cy = times.get("compiled")
        speedup = f"{py / cy:6.1f}x" if py and cy else "      -"
        cy_txt = f"{cy * 1000:8.1f}ms" if cy else "         -"
        print(f"{case:>12} | {py * 1000:8.1f}ms | {cy_txt} | {speedup}")


def bench_rectangles(repeats, sizes):
    rng = np.random.default_rng(7)
    rows = []
    for n in sizes:
        src, tgt = make_pair(rng, n)
        ev = BeadEvaluator(
            src, tgt,
            rng.integers(10, 60, n), rng.integers(10, 60, n),
            c=0.6, p=0.06, w=0.33, char_ratio=1.0,
        )
        shapes = shape_table(4, False, True)
        times = {}
        for name, kernel in available_kernels():
            times[name] = best_of(
                repeats, lambda: dp_segment(ev, shapes, 0, n, 0, n, kernel=kernel)
            )
        rows.append((f"{n}x{n}", times))
    return rows


def bench_documents(repeats, sizes):
    rng = np.random.default_rng(11)
    rows = []
    for n in sizes:
        src, tgt = make_pair(rng, n, noise=0.1)
        lengths = np.full(n, 30, dtype=np.int64)
        doc = SentenceDoc(sentences=["x" * 30] * n, char_lengths=lengths)
        times = {}
        for name, kernel in available_kernels():
            def run():
                result = align_documents(doc, doc, src, tgt, kernel=kernel)
                return result.timings["dp"]
            # wall time of the dp stage only; anchoring is kernel-independent
            best = float("inf")
            for _ in range(repeats):
                best = min(best, run())
            times[name] = best
        rows.append((f"n={n}", times))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true", help="smaller sizes, single repeat")
    args = parser.parse_args()
    repeats = 1 if args.quick else 3
    rect_sizes = [40, 100] if args.quick else [40, 100, 250]
    doc_sizes = [500] if args.quick else [1000, 3000]

    if not kernels.HAVE_COMPILED:
        print("compiled kernel not built; timing the python fallback only")

    print_table(
        "single rectangle (unanchored DP, full quadratic lattice)",
        bench_rectangles(repeats, rect_sizes),
    )
    print_table(
        "document alignment, dp stage (anchored, many small rectangles)",
        bench_documents(repeats, doc_sizes),
    )


if __name__ == "__main__":
    main()
