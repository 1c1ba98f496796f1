#!/usr/bin/env python3
"""Benchmark: compiled window kernel vs the pure-Python fallback.

Times the rolling-window state computation (the pipeline's hot loop) on
synthetic token streams at several sizes and prints the speedup.  Run:

    python benchmarks/bench_window.py [--sizes 20000,100000,500000] [--window 20]
"""

import argparse
import time

import numpy as np

from emodyn._kernels import (BACKEND, window_states_compiled,
                             window_states_python)


def best_of(fn, repeats, *args):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - started)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20000,100000,500000")
    parser.add_argument("--window", type=int, default=20)
    parser.add_argument("--match-rate", type=float, default=0.8)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if BACKEND != "cython":
        parser.error("compiled backend not built; reinstall without EMODYN_PURE_PYTHON")

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(0)
    print(f"window={args.window} match_rate={args.match_rate} repeats={args.repeats}")
    print(f"{'tokens':>10} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n in sizes:
        scores = rng.random(n)
        matched = (rng.random(n) < args.match_rate).astype(np.uint8)
        t_py = best_of(window_states_python, args.repeats, scores, matched, args.window)
        t_cy = best_of(window_states_compiled, args.repeats, scores, matched, args.window)
        i_py, v_py = window_states_python(scores, matched, args.window)
        i_cy, v_cy = window_states_compiled(scores, matched, args.window)
        assert (i_py == i_cy).all() and (v_py == v_cy).all(), "backend mismatch"
        print(f"{n:>10} {t_py:>11.3f}s {t_cy:>11.3f}s {t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
