import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscnet import _kernels as kn


@given(st.lists(st.integers(min_value=0, max_value=15), min_size=1, max_size=16))
@settings(max_examples=60, deadline=None)
def test_pack_unpack_roundtrip(occ):
    key = kn.pack_occupations(occ)
    assert kn.unpack_occupations(key, len(occ)) == tuple(occ)


def test_pack_overflow():
    with pytest.raises(OverflowError):
        kn.pack_occupations([16])


def _random_sparse_state(rng, num_modes, size):
    keys = set()
    while len(keys) < size:
        occ = rng.integers(0, 3, size=num_modes)
        keys.add(kn.pack_occupations(occ))
    keys = np.array(sorted(keys), dtype=np.uint64)
    amps = rng.normal(size=keys.size) + 1j * rng.normal(size=keys.size)
    return keys, amps


@pytest.mark.skipif(not kn.HAVE_NUMBA, reason="numba unavailable")
class TestPathAgreement:
    def test_apply_creation_column(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            num_modes = int(rng.integers(2, 9))
            keys, amps = _random_sparse_state(rng, num_modes, int(rng.integers(1, 40)))
            col = rng.normal(size=num_modes) + 1j * rng.normal(size=num_modes)
            col[rng.random(num_modes) < 0.3] = 0.0
            k1, a1 = kn.apply_creation_column_numpy(keys, amps, col)
            k2, a2 = kn.apply_creation_column_numba(keys, amps, col)
            assert np.array_equal(k1, k2)
            assert np.abs(a1 - a2).max() <= 1e-12

    def test_empty_inputs(self):
        empty_keys = np.empty(0, dtype=np.uint64)
        empty_amps = np.empty(0, dtype=np.complex128)
        col = np.ones(3, dtype=np.complex128)
        for impl in (kn.apply_creation_column_numpy, kn.apply_creation_column_numba):
            k, a = impl(empty_keys, empty_amps, col)
            assert k.size == 0 and a.size == 0
            k, a = impl(np.zeros(1, dtype=np.uint64), np.ones(1, dtype=np.complex128),
                        np.zeros(3, dtype=np.complex128))
            assert k.size == 0 and a.size == 0

    def test_sector_hamiltonian(self):
        from itertools import combinations
        rng = np.random.default_rng(9)
        n, k = 8, 2
        states = np.array(sorted(sum(1 << b for b in combo)
                                 for combo in combinations(range(n), k)), dtype=np.uint64)
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        eu = np.array([e[0] for e in edges], dtype=np.int64)
        ev = np.array([e[1] for e in edges], dtype=np.int64)
        freqs = rng.normal(size=n)
        h1 = kn.sector_hamiltonian_numpy(states, eu, ev, freqs, 0.7)
        h2 = kn.sector_hamiltonian_numba(states, eu, ev, freqs, 0.7)
        assert np.array_equal(h1, h2)
        assert np.array_equal(h1, h1.T)


def test_sector_hamiltonian_top_bit():
    # node 63 exercises the high bit of the uint64 mask
    states = np.array(sorted([(1 << 63) | 1, (1 << 63) | 2, 3]), dtype=np.uint64)
    eu = np.array([0], dtype=np.int64)
    ev = np.array([1], dtype=np.int64)
    freqs = np.zeros(64)
    h = kn.sector_hamiltonian(states, eu, ev, freqs, 1.0)
    i = list(states).index(np.uint64((1 << 63) | 1))
    j = list(states).index(np.uint64((1 << 63) | 2))
    assert h[i, j] == 1.0 == h[j, i]


def test_creation_ladder_factors():
    # repeated application on one mode must produce sqrt(n!) growth
    key0 = np.array([0], dtype=np.uint64)
    amp0 = np.array([1.0 + 0j])
    col = np.zeros(3, dtype=np.complex128)
    col[1] = 1.0
    keys, amps = key0, amp0
    for _ in range(3):
        keys, amps = kn.apply_creation_column(keys, amps, col)
    assert kn.unpack_occupations(keys[0], 3) == (0, 3, 0)
    assert amps[0] == pytest.approx(np.sqrt(6.0))


def test_env_flag_selects_numpy_path():
    code = ("import oscnet._kernels as k; "
            "assert not k.USE_NUMBA; "
            "assert k.apply_creation_column is k.apply_creation_column_numpy")
    proc = subprocess.run([sys.executable, "-c", code],
                          env={"PATH": "/usr/bin:/bin", "OSCNET_NO_NUMBA": "1"},
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_numpy_fallback_drives_oracle():
    # full oracle run on the fallback path in a subprocess
    code = """
import math
from oscnet import *
from oscnet.fockoracle import same_direction_pairs
import oscnet._kernels as k
assert not k.USE_NUMBA
split = SubcubeSplit.from_eta(2, (1,), 0.2)
s, r = same_direction_pairs(split)
fids = parallel_fidelities(s, r, split, transfer_time(1.0))
assert all(0.9 < f.fidelity < 1.0 for f in fids), fids
"""
    proc = subprocess.run([sys.executable, "-c", code],
                          env={"PATH": "/usr/bin:/bin", "OSCNET_NO_NUMBA": "1"},
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
