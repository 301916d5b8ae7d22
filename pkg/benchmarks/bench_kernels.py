#!/usr/bin/env python3
"""Benchmark the JIT kernels against their pure-numpy fallbacks.

Runs both implementations of each hot kernel on representative workloads
(the d=6 two-excitation sector assembly and a d=3 massively-parallel
style bosonic expansion) and prints the timings side by side.  The
package picks one path at import time via OSCNET_NO_NUMBA; this script
imports both explicitly.
"""

import time
from itertools import combinations

import numpy as np

from oscnet import _kernels as kn
from oscnet import build_hypercube


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def sector_workload():
    top = build_hypercube(6)
    states = np.array(sorted(sum(1 << int(b) for b in combo)
                             for combo in combinations(range(64), 2)), dtype=np.uint64)
    edge_u = np.ascontiguousarray(top.edges[:, 0])
    edge_v = np.ascontiguousarray(top.edges[:, 1])
    freqs = np.linspace(-1.0, 1.0, 64)
    return states, edge_u, edge_v, freqs, 1.0


def expansion_workload():
    rng = np.random.default_rng(0)
    num_modes = 8
    cols = rng.normal(size=(num_modes, num_modes)) + 1j * rng.normal(size=(num_modes, num_modes))
    cols /= np.linalg.norm(cols, axis=1, keepdims=True)
    return cols


def run_expansion(apply_column, cols):
    keys = np.zeros(1, dtype=np.uint64)
    amps = np.ones(1, dtype=np.complex128)
    for k in range(cols.shape[0]):
        keys, amps = apply_column(keys, amps, np.ascontiguousarray(cols[k]))
    return keys.size


def main():
    if not kn.HAVE_NUMBA:
        print("numba not importable; nothing to compare")
        return

    print(f"numba path selected by default: {kn.USE_NUMBA}")
    rows = []

    args = sector_workload()
    kn.sector_hamiltonian_numba(*args)  # compile
    t_np = best_of(lambda: kn.sector_hamiltonian_numpy(*args))
    t_nb = best_of(lambda: kn.sector_hamiltonian_numba(*args))
    rows.append(("sector_hamiltonian (C(64,2)=2016, 192 edges)", t_np, t_nb))

    cols = expansion_workload()
    run_expansion(kn.apply_creation_column_numba, cols)  # compile
    support = run_expansion(kn.apply_creation_column_numpy, cols)
    t_np = best_of(lambda: run_expansion(kn.apply_creation_column_numpy, cols))
    t_nb = best_of(lambda: run_expansion(kn.apply_creation_column_numba, cols))
    rows.append((f"apply_creation_column (8 ops on 8 modes, {support} tuples)", t_np, t_nb))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel workload':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(f"{name:<{width}}  {t_np * 1e3:>8.2f}ms  {t_nb * 1e3:>8.2f}ms  {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
