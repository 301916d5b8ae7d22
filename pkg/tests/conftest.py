import math

import numpy as np

from oscnet import build_custom, coupling_from_topology


def random_coupled_graph(rng, max_nodes=5):
    """Random small custom network with random node frequencies."""
    n = int(rng.integers(2, max_nodes + 1))
    candidates = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in candidates if rng.random() < 0.6]
    if not edges:
        edges = [candidates[int(rng.integers(0, len(candidates)))]]
    freqs = rng.normal(0.0, 1.0, n)
    top = build_custom(n, edges)
    return top, coupling_from_topology(top, 1.0, freqs)


def correction_phase_of(alpha: complex) -> float:
    return (-math.atan2(alpha.imag, alpha.real)) % (2.0 * math.pi)


def assert_close(a, b, tol, label=""):
    assert abs(a - b) <= tol, f"{label} |{a!r} - {b!r}| = {abs(a - b):.3e} > {tol:.1e}"


def as_array(state):
    """Dense |amplitude| lookup helper for comparing sparse states."""
    keys = sorted(state.amplitudes)
    return keys, np.array([state.amplitudes[k] for k in keys])
