"""Benchmark the compiled indicator kernels against the pure-Python twin.

Times the grid kernel over a production-scale synthetic corpus, exactly as
run_sweep drives it. Run from the repository root:

    python benchmarks/bench_kernels.py [--researchers N] [--repeats K]
"""
from __future__ import annotations

import argparse
import time

from midas import _kernels_py
from midas.kernels import PackedPublications, int_buffer, zero_buffer
from midas.sweep import DEFAULT_X_VALUES, DEFAULT_Y_VALUES
from midas.synth import SynthConfig, generate_synthetic

try:
    from midas import _ckernels
except ImportError:
    _ckernels = None


def build_workload(n_researchers: int):
    corpus = generate_synthetic(
        SynthConfig(n_researchers=n_researchers, pubs_min=20, pubs_max=80,
                    career_start_min=1980, career_start_max=2015),
        seed=0,
    )
    packed = [PackedPublications(r.publications) for r in corpus.researchers]
    n_pubs = sum(p.n for p in packed)
    return corpus, packed, n_pubs


def run_backend(impl, packed, xs, ys, as_of, min_age):
    n_cells = len(xs) * len(ys)
    out = zero_buffer(n_cells)
    checksum = 0
    for p in packed:
        eligible = impl.grid_hit_counts(
            p.years, p.flat, p.offs, p.lens, as_of, min_age, xs, ys, out
        )
        checksum += eligible + sum(out)
    return checksum


def time_backend(impl, packed, xs, ys, as_of, min_age, repeats):
    best = float("inf")
    checksum = None
    for _ in range(repeats):
        started = time.perf_counter()
        checksum = run_backend(impl, packed, xs, ys, as_of, min_age)
        best = min(best, time.perf_counter() - started)
    return best, checksum


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--researchers", type=int, default=3000)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    corpus, packed, n_pubs = build_workload(args.researchers)
    xs = int_buffer(DEFAULT_X_VALUES)
    ys = int_buffer(DEFAULT_Y_VALUES)
    cells = len(xs) * len(ys)
    as_of = corpus.reference_year
    min_age = max(DEFAULT_X_VALUES)
    evals = n_pubs * cells
    print(f"workload: {len(packed)} researchers, {n_pubs} publications, "
          f"{cells} grid cells ({evals:,} predicate evaluations)")

    py_time, py_sum = time_backend(_kernels_py, packed, xs, ys, as_of, min_age,
                                   args.repeats)
    print(f"pure python : {py_time * 1e3:9.1f} ms")
    if _ckernels is None:
        print("compiled    :   not built (python setup.py build_ext --inplace)")
        return 0
    cy_time, cy_sum = time_backend(_ckernels, packed, xs, ys, as_of, min_age,
                                   args.repeats)
    assert cy_sum == py_sum, "backends disagree"
    print(f"compiled    : {cy_time * 1e3:9.1f} ms")
    print(f"speedup     : {py_time / cy_time:9.1f}x (identical results)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
