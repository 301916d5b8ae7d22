"""Hot numeric kernels, JIT-compiled when numba is available.

Set ``OSCNET_NO_NUMBA=1`` to force the pure-numpy fallback path (the
default uses numba whenever it imports).  Both implementations of each
kernel are exported so the benchmark in ``benchmarks/`` can compare them;
``sector_hamiltonian`` and ``apply_creation_column`` are the selected
aliases the rest of the package uses.

Occupation encoding: a multi-mode Fock occupation is packed into a uint64
key, 4 bits per mode (mode ``l`` lives in bits ``4l..4l+3``).  This caps
kernels at 16 modes and occupation 15 per mode; callers guard both.

Hard-core sector states are uint64 bitmasks (one bit per node, up to 64
nodes), kept sorted so targets resolve by binary search.
"""

from __future__ import annotations

import os

import numpy as np

PACK_BITS = 4
PACK_MAX_MODES = 64 // PACK_BITS
PACK_MAX_OCC = (1 << PACK_BITS) - 1


def _numba_disabled() -> bool:
    return os.environ.get("OSCNET_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _numba_disabled()


# ---------------------------------------------------------------------------
# bosonic creation-operator application
# ---------------------------------------------------------------------------

def apply_creation_column_numpy(keys, amps, col):
    """Apply sum_l col[l] * a_l^dagger to a packed sparse state.

    ``keys`` are uint64 packed occupations, ``amps`` their complex
    amplitudes, ``col`` the complex coefficient per mode.  Returns the
    aggregated (keys, amps) of the new state, sorted by key.
    """
    nz = np.flatnonzero(col != 0)
    if nz.size == 0 or keys.size == 0:
        return np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.complex128)
    shifts = (PACK_BITS * nz).astype(np.uint64)
    occ = (keys[:, None] >> shifts[None, :]) & np.uint64(PACK_MAX_OCC)
    new_keys = (keys[:, None] + (np.uint64(1) << shifts[None, :])).ravel()
    new_amps = (amps[:, None] * col[nz][None, :] * np.sqrt(occ + 1.0)).ravel()
    uniq, inverse = np.unique(new_keys, return_inverse=True)
    out = np.zeros(uniq.size, dtype=np.complex128)
    np.add.at(out, inverse, new_amps)
    return uniq, out


# ---------------------------------------------------------------------------
# hard-core (qubit) sector Hamiltonian assembly
# ---------------------------------------------------------------------------

def sector_hamiltonian_numpy(states, edge_u, edge_v, freqs, omega0):
    """Dense Hamiltonian on a fixed-excitation hard-core sector.

    ``states`` is a sorted uint64 array of occupation bitmasks with equal
    popcount; hopping moves one excitation across an edge, the diagonal is
    the sum of occupied node frequencies.
    """
    dim = states.size
    n = freqs.size
    h = np.zeros((dim, dim))
    occ = ((states[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(float)
    idx = np.arange(dim)
    h[idx, idx] = occ @ freqs
    one = np.uint64(1)
    for u, v in zip(edge_u, edge_v):
        bu, bv = np.uint64(u), np.uint64(v)
        hop = (((states >> bu) ^ (states >> bv)) & one).astype(bool)
        if not hop.any():
            continue
        src = states[hop]
        tgt = src ^ ((one << bu) | (one << bv))
        h[idx[hop], np.searchsorted(states, tgt)] = omega0
    return h


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def apply_creation_column_numba(keys, amps, col):  # pragma: no cover - jitted
        shift_unit = np.uint64(PACK_BITS)
        occ_mask = np.uint64(PACK_MAX_OCC)
        one = np.uint64(1)
        nnz = 0
        for l in range(col.size):
            if col[l].real != 0.0 or col[l].imag != 0.0:
                nnz += 1
        active = np.empty(nnz, dtype=np.int64)
        pos = 0
        for l in range(col.size):
            if col[l].real != 0.0 or col[l].imag != 0.0:
                active[pos] = l
                pos += 1
        size = keys.size
        if size == 0 or nnz == 0:
            return np.empty(0, dtype=np.uint64), np.empty(0, dtype=np.complex128)
        # Raising mode l maps sorted keys to sorted keys, so the result is
        # an nnz-way merge of sorted streams; stream j holds
        # keys + (1 << 4*active[j]) with the matching ladder amplitudes.
        stream_keys = np.empty((nnz, size), dtype=np.uint64)
        stream_amps = np.empty((nnz, size), dtype=np.complex128)
        for j in range(nnz):
            l = active[j]
            sh = np.uint64(l) * shift_unit
            inc = one << sh
            c = col[l]
            for i in range(size):
                k = keys[i]
                occ = (k >> sh) & occ_mask
                stream_keys[j, i] = k + inc
                stream_amps[j, i] = amps[i] * c * np.sqrt(float(occ) + 1.0)
        heads = np.zeros(nnz, dtype=np.int64)
        out_keys = np.empty(nnz * size, dtype=np.uint64)
        out_amps = np.empty(nnz * size, dtype=np.complex128)
        count = 0
        exhausted = 0
        while exhausted < nnz:
            lowest = np.uint64(0xFFFFFFFFFFFFFFFF)
            for j in range(nnz):
                if heads[j] < size and stream_keys[j, heads[j]] < lowest:
                    lowest = stream_keys[j, heads[j]]
            acc = 0j
            exhausted = 0
            for j in range(nnz):
                if heads[j] < size:
                    if stream_keys[j, heads[j]] == lowest:
                        acc += stream_amps[j, heads[j]]
                        heads[j] += 1
                if heads[j] >= size:
                    exhausted += 1
            out_keys[count] = lowest
            out_amps[count] = acc
            count += 1
        return out_keys[:count].copy(), out_amps[:count].copy()

    @numba.njit(cache=True)
    def sector_hamiltonian_numba(states, edge_u, edge_v, freqs, omega0):  # pragma: no cover - jitted
        dim = states.size
        h = np.zeros((dim, dim))
        one = np.uint64(1)
        for i in range(dim):
            s = states[i]
            dsum = 0.0
            for v in range(freqs.size):
                if (s >> np.uint64(v)) & one:
                    dsum += freqs[v]
            h[i, i] = dsum
        for e in range(edge_u.size):
            bu = np.uint64(edge_u[e])
            bv = np.uint64(edge_v[e])
            flip = (one << bu) | (one << bv)
            for i in range(dim):
                s = states[i]
                if ((s >> bu) ^ (s >> bv)) & one:
                    j = np.searchsorted(states, s ^ flip)
                    h[i, j] = omega0
        return h

else:  # pragma: no cover - exercised only without numba
    apply_creation_column_numba = None
    sector_hamiltonian_numba = None


if USE_NUMBA:
    apply_creation_column = apply_creation_column_numba
    sector_hamiltonian = sector_hamiltonian_numba
else:
    apply_creation_column = apply_creation_column_numpy
    sector_hamiltonian = sector_hamiltonian_numpy


def pack_occupations(occ) -> np.uint64:
    """Pack a mode-occupation tuple into a uint64 key."""
    key = np.uint64(0)
    for l, n in enumerate(occ):
        if n > PACK_MAX_OCC:
            raise OverflowError(f"occupation {n} exceeds packed limit {PACK_MAX_OCC}")
        key |= np.uint64(n) << np.uint64(PACK_BITS * l)
    return key


def unpack_occupations(key: np.uint64, num_modes: int) -> tuple[int, ...]:
    """Inverse of :func:`pack_occupations`."""
    k = int(key)
    return tuple((k >> (PACK_BITS * l)) & PACK_MAX_OCC for l in range(num_modes))
