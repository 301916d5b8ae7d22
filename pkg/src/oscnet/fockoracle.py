"""Exact brute-force simulation of entanglement transfer.

Ground truth for every analytic bound in the package.  States are sparse
maps from occupation tuples to complex amplitudes: one auxiliary qubit per
sender (static under evolution) plus the network modes, either bosonic
(truncated at ``n_max``, never silently) or hard-core (occupation <= 1).

Oscillator evolution transforms each branch's creation-operator string
through the single-particle unitary K(t) and re-expands in the occupation
basis, which is exact for these quadratic networks; a dense Fock-basis
matrix exponential is kept as an independent small-instance cross-check.
Qubit evolution exponentiates the Hamiltonian restricted to each
fixed-excitation sector.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import ContractViolation, ResourceLimit, TruncationError
from .fidelity import METHOD_ORACLE, PairFidelity
from .modevo import evolve_hypercube_fast, evolve_modes
from .netgraph import CouplingMatrix, SubcubeSplit, program_subcube_split, scatter_bits

MAX_SENDERS = 12
MAX_QUBIT_EXCITATIONS = 4
MAX_SECTOR_DIM = 200_000
NORM_TOL = 1e-9

Basis = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass
class FockStateVector:
    """Sparse multi-mode state with one aux qubit per sender.

    ``amplitudes`` maps (aux occupations, mode occupations) tuples to
    complex amplitudes; aux qubit j belongs to ``senders[j]``.
    """

    num_modes: int
    senders: tuple[int, ...]
    n_max: int
    amplitudes: dict[Basis, complex] = field(repr=False)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def sector_weights(self) -> dict[tuple[tuple[int, ...], int], float]:
        """Probability weight per (aux pattern, total excitation) sector."""
        out: dict[tuple[tuple[int, ...], int], float] = {}
        for (aux, modes), amp in self.amplitudes.items():
            key = (aux, sum(aux) + sum(modes))
            out[key] = out.get(key, 0.0) + abs(amp) ** 2
        return out

    def _validate(self):
        m = len(self.senders)
        for (aux, modes), _ in self.amplitudes.items():
            if len(aux) != m or len(modes) != self.num_modes:
                raise ValueError("occupation tuple shape mismatch")
            if any(b not in (0, 1) for b in aux):
                raise ValueError("aux occupations must be 0 or 1")
            if any(n < 0 or n > self.n_max for n in modes):
                raise TruncationError(
                    f"mode occupation outside [0, {self.n_max}]")


@dataclass
class QubitNetworkState(FockStateVector):
    """Hard-core variant: every network occupation is 0 or 1."""

    def _validate(self):
        if self.n_max != 1:
            raise ValueError("qubit network states have n_max = 1")
        super()._validate()


def prepare_initial(num_modes: int, senders, n_max: int | None = None) -> FockStateVector:
    """Product of Bell states, one per sender's qubit-oscillator pair.

    The state is 2^(-M/2) * prod_j (1 + a_dag[s_j] b_dag[s_j]) |vac>:
    exactly 2^M nonzero amplitudes of 2^(-M/2) each.  ``n_max`` defaults
    to M so that no later evolution can overflow the truncation.
    """
    senders = tuple(int(s) for s in senders)
    m = len(senders)
    if len(set(senders)) != m:
        raise ValueError("senders must be distinct")
    if m > MAX_SENDERS:
        raise ResourceLimit(f"at most {MAX_SENDERS} senders (2^M branches), got {m}")
    if any(s < 0 or s >= num_modes for s in senders):
        raise ValueError("sender index out of range")
    if n_max is None:
        n_max = max(m, 1)
    if n_max < m:
        raise TruncationError(f"n_max={n_max} cannot hold {m} excitations on one mode")
    amp = 2.0 ** (-m / 2.0)
    amplitudes: dict[Basis, complex] = {}
    for subset in range(1 << m):
        aux = tuple((subset >> j) & 1 for j in range(m))
        modes = [0] * num_modes
        for j in range(m):
            if aux[j]:
                modes[senders[j]] += 1
        amplitudes[(aux, tuple(modes))] = complex(amp)
    state = FockStateVector(num_modes=num_modes, senders=senders,
                            n_max=int(n_max), amplitudes=amplitudes)
    state._validate()
    return state


def prepare_initial_qubit(num_modes: int, senders) -> QubitNetworkState:
    """Hard-core analogue of :func:`prepare_initial` (n_max = 1)."""
    base = prepare_initial(num_modes, senders, n_max=max(len(tuple(senders)), 1))
    state = QubitNetworkState(num_modes=base.num_modes, senders=base.senders,
                              n_max=1, amplitudes=base.amplitudes)
    state._validate()
    return state


def _check_norm_preserved(before: float, after: float):
    if abs(after - before) > NORM_TOL * max(1.0, before):
        raise FloatingPointError(
            f"evolution changed the state norm ({before!r} -> {after!r})")


def _mode_columns(kmat: np.ndarray) -> np.ndarray:
    # U a_k^dag U^dag = sum_l K[k, l] a_l^dag, so row k holds the
    # coefficients applied when re-expanding mode k's excitations.
    return kmat


def evolve_oscillator(state: FockStateVector, omega: CouplingMatrix, t: float) -> FockStateVector:
    """Exact bosonic evolution by creation-operator re-expansion.

    Each basis entry |n1..nN> is rewritten as a product of transformed
    creation operators and expanded back into occupation tuples with the
    bosonic sqrt(n+1) ladder factors.  Raises rather than truncating when
    a branch carries more excitations than ``n_max`` can hold.
    """
    if omega.num_nodes != state.num_modes:
        raise ValueError("coupling matrix size does not match the state")
    if state.num_modes > _kernels.PACK_MAX_MODES:
        raise ResourceLimit(
            f"oscillator oracle packs occupations 4 bits/mode; "
            f"at most {_kernels.PACK_MAX_MODES} modes, got {state.num_modes}")
    max_total = max((sum(modes) for (_, modes) in state.amplitudes), default=0)
    if max_total > state.n_max:
        raise TruncationError(
            f"branch with {max_total} excitations exceeds n_max={state.n_max}")
    if max_total > _kernels.PACK_MAX_OCC:
        raise ResourceLimit(
            f"packed occupations cap at {_kernels.PACK_MAX_OCC} per mode")

    norm_before = state.norm()
    kmat = evolve_modes(omega, t).matrix
    cols = _mode_columns(kmat)
    out: dict[Basis, complex] = {}
    for (aux, modes), amp in state.amplitudes.items():
        keys = np.zeros(1, dtype=np.uint64)
        # |n1..nN> = prod (a_dag)^n / sqrt(prod n_k!) |vac>
        scale = amp
        for n in modes:
            scale /= math.sqrt(math.factorial(n))
        amps = np.array([scale], dtype=np.complex128)
        for k, n in enumerate(modes):
            col = np.ascontiguousarray(cols[k])
            for _ in range(n):
                keys, amps = _kernels.apply_creation_column(keys, amps, col)
        for key, value in zip(keys, amps):
            basis = (aux, _kernels.unpack_occupations(key, state.num_modes))
            out[basis] = out.get(basis, 0j) + complex(value)

    result = FockStateVector(num_modes=state.num_modes, senders=state.senders,
                             n_max=state.n_max, amplitudes=out)
    _check_norm_preserved(norm_before, result.norm())
    return result


_SECTOR_CACHE: OrderedDict[tuple, tuple] = OrderedDict()
_SECTOR_CACHE_SIZE = 8


def _sector_basis(num_modes: int, k: int) -> np.ndarray:
    masks = np.fromiter(
        (sum(1 << int(b) for b in combo) for combo in combinations(range(num_modes), k)),
        dtype=np.uint64, count=math.comb(num_modes, k))
    masks.sort()
    return masks


def _uniform_coupling(omega: CouplingMatrix) -> tuple[np.ndarray, np.ndarray, float]:
    edge_u, edge_v = omega.edge_arrays()
    if edge_u.size == 0:
        return edge_u, edge_v, 0.0
    vals = omega.matrix[edge_u, edge_v]
    if not np.all(vals == vals[0]):
        raise ValueError("hard-core sector evolution supports uniform couplings only")
    return edge_u, edge_v, float(vals[0])


def _sector_eig(omega: CouplingMatrix, k: int):
    key = (omega.fingerprint(), k, omega.num_nodes)
    hit = _SECTOR_CACHE.get(key)
    if hit is not None:
        _SECTOR_CACHE.move_to_end(key)
        return hit
    basis = _sector_basis(omega.num_nodes, k)
    if basis.size > MAX_SECTOR_DIM:
        raise ResourceLimit(
            f"excitation sector dimension {basis.size} exceeds {MAX_SECTOR_DIM}")
    edge_u, edge_v, omega0 = _uniform_coupling(omega)
    freqs = np.ascontiguousarray(np.diag(omega.matrix))
    h = _kernels.sector_hamiltonian(basis, edge_u, edge_v, freqs, omega0)
    eigvals, eigvecs = np.linalg.eigh(h)
    entry = (basis, eigvals, eigvecs)
    _SECTOR_CACHE[key] = entry
    if len(_SECTOR_CACHE) > _SECTOR_CACHE_SIZE:
        _SECTOR_CACHE.popitem(last=False)
    return entry


def evolve_qubit(state: QubitNetworkState, omega: CouplingMatrix, t: float) -> QubitNetworkState:
    """Hard-core evolution, sector by sector.

    Amplitude groups with the same aux pattern and excitation number are
    rotated with the dense eigendecomposition of that sector's
    Hamiltonian; aux qubits are static spectators.
    """
    if omega.num_nodes != state.num_modes:
        raise ValueError("coupling matrix size does not match the state")
    if state.num_modes > 64:
        raise ResourceLimit("hard-core masks are capped at 64 network nodes")
    norm_before = state.norm()

    groups: dict[tuple[tuple[int, ...], int], list[tuple[int, complex]]] = {}
    for (aux, modes), amp in state.amplitudes.items():
        k = sum(modes)
        if k > MAX_QUBIT_EXCITATIONS:
            raise ContractViolation(
                f"{k} network excitations exceed the sector cap {MAX_QUBIT_EXCITATIONS}")
        mask = 0
        for v, n in enumerate(modes):
            if n:
                mask |= 1 << v
        groups.setdefault((aux, k), []).append((mask, amp))

    out: dict[Basis, complex] = {}
    for (aux, k), entries in groups.items():
        if k == 0:
            basis_tuple = (aux, (0,) * state.num_modes)
            out[basis_tuple] = out.get(basis_tuple, 0j) + sum(a for _, a in entries)
            continue
        basis, eigvals, eigvecs = _sector_eig(omega, k)
        vec = np.zeros(basis.size, dtype=np.complex128)
        masks = np.fromiter((m for m, _ in entries), dtype=np.uint64, count=len(entries))
        idx = np.searchsorted(basis, masks)
        for pos, (_, amp) in zip(idx, entries):
            vec[pos] += amp
        vec = eigvecs @ (np.exp(-1j * eigvals * t) * (eigvecs.T @ vec))
        for mask, amp in zip(basis, vec):
            modes = tuple((int(mask) >> v) & 1 for v in range(state.num_modes))
            basis_tuple = (aux, modes)
            out[basis_tuple] = out.get(basis_tuple, 0j) + complex(amp)

    result = QubitNetworkState(num_modes=state.num_modes, senders=state.senders,
                               n_max=1, amplitudes=out)
    _check_norm_preserved(norm_before, result.norm())
    return result


def bell_fidelity(state: FockStateVector, sender_index: int, receiver: int,
                  correction_phase: float) -> PairFidelity:
    """Exact Bell fidelity of the pair (aux qubit, receiver mode).

    Partial-traces the state down to (aux qubit of sender_index, receiver
    mode), applies the local phase correction, and overlaps with the Bell
    state.  Receiver occupations >= 2 lie outside the qubit block: they
    contribute trace weight but no overlap.
    """
    m = len(state.senders)
    if not 0 <= sender_index < m:
        raise IndexError(f"sender index {sender_index} out of range for {m} senders")
    if not 0 <= receiver < state.num_modes:
        raise IndexError(f"receiver mode {receiver} out of range")
    norm = state.norm()
    if abs(norm - 1.0) > 1e-6:
        raise ContractViolation(f"state norm {norm!r} is not 1")

    rest_groups: dict[tuple, list[complex]] = {}
    rho00 = 0.0
    rho11 = 0.0
    for (aux, modes), amp in state.amplitudes.items():
        b, n = aux[sender_index], modes[receiver]
        if (b, n) == (0, 0):
            slot = 0
        elif (b, n) == (1, 1):
            slot = 1
        else:
            continue
        rest = (aux[:sender_index] + aux[sender_index + 1:],
                modes[:receiver] + modes[receiver + 1:])
        pair = rest_groups.setdefault(rest, [0j, 0j])
        pair[slot] += amp
    coherence = 0j
    for amp00, amp11 in rest_groups.values():
        rho00 += abs(amp00) ** 2
        rho11 += abs(amp11) ** 2
        coherence += amp11 * np.conj(amp00)
    # The correction rotates the receiver's |1> by e^{i*phi}; with
    # phi = -arg(alpha) that turns the <11|rho|00> coherence real positive.
    fid = 0.5 * (rho00 + rho11) + (np.exp(1j * correction_phase) * coherence).real
    fid = min(max(float(fid), 0.0), 1.0)
    return PairFidelity(sender=state.senders[sender_index], receiver=receiver,
                        fidelity=fid, correction_phase=correction_phase % (2.0 * math.pi),
                        method=METHOD_ORACLE)


def _check_pairs(split: SubcubeSplit, senders, receivers) -> tuple[tuple[int, ...], tuple[int, ...]]:
    senders = tuple(int(s) for s in senders)
    receivers = tuple(int(r) for r in receivers)
    if len(senders) != len(receivers):
        raise ContractViolation("sender and receiver lists differ in length")
    mask = split.transfer_mask
    for s, r in zip(senders, receivers):
        if r != s ^ mask:
            raise ContractViolation(
                f"pair ({s}, {r}) is not subcube-antipodal under transfer mask {mask:#x}")
    return senders, receivers


def parallel_fidelities(senders, receivers, split: SubcubeSplit, t: float,
                        n_max: int | None = None) -> list[PairFidelity]:
    """Per-pair oscillator fidelities after one joint evolution.

    All pairs must be antipodal within their subcubes.  Correction phases
    come from the mode-evolution amplitudes of the programmed network.
    """
    senders, receivers = _check_pairs(split, senders, receivers)
    omega = program_subcube_split(split)
    kmat = evolve_modes(omega, t).matrix
    state = prepare_initial(split.num_nodes, senders, n_max=n_max)
    evolved = evolve_oscillator(state, omega, t)
    results = []
    for j, (s, r) in enumerate(zip(senders, receivers)):
        phi = -math.atan2(kmat[s, r].imag, kmat[s, r].real)
        results.append(bell_fidelity(evolved, j, r, phi))
    return results


def qubit_parallel_fidelities(senders, receivers, split: SubcubeSplit,
                              t: float) -> list[PairFidelity]:
    """Hard-core analogue of :func:`parallel_fidelities` (one per channel)."""
    senders, receivers = _check_pairs(split, senders, receivers)
    omega = program_subcube_split(split)
    kmat = evolve_hypercube_fast(split, t).matrix
    state = prepare_initial_qubit(split.num_nodes, senders)
    evolved = evolve_qubit(state, omega, t)
    results = []
    for j, (s, r) in enumerate(zip(senders, receivers)):
        phi = -math.atan2(kmat[s, r].imag, kmat[s, r].real)
        results.append(bell_fidelity(evolved, j, r, phi))
    return results


def same_direction_pairs(split: SubcubeSplit, transfer_pattern: int = 0):
    """One sender/receiver pair per subcube, all transferring in parallel.

    Senders sit at the same relative position ``transfer_pattern`` on each
    subcube; receivers are the subcube antipodes.
    """
    channel_positions = sorted(split.channel_bits)
    transfer_positions = sorted(set(range(split.d)) - split.channel_bits)
    if transfer_pattern >> len(transfer_positions):
        raise ValueError("transfer_pattern has more bits than transfer positions")
    offset = scatter_bits(transfer_pattern, transfer_positions)
    senders = [scatter_bits(c, channel_positions) | offset for c in range(1 << split.m)]
    receivers = [s ^ split.transfer_mask for s in senders]
    return senders, receivers


def all_node_pairs(split: SubcubeSplit):
    """Every node sending to its subcube antipode (massively parallel use)."""
    senders = list(range(split.num_nodes))
    receivers = [s ^ split.transfer_mask for s in senders]
    return senders, receivers


def _tuples_with_sum(num_modes: int, total: int, cap: int):
    if num_modes == 1:
        if total <= cap:
            yield (total,)
        return
    for n in range(min(total, cap) + 1):
        for rest in _tuples_with_sum(num_modes - 1, total - n, cap):
            yield (n,) + rest


def evolve_oscillator_dense_reference(state: FockStateVector, omega: CouplingMatrix,
                                      t: float) -> FockStateVector:
    """Independent cross-check: dense Hamiltonian exponential in the Fock basis.

    Builds the truncated-Fock Hamiltonian on each total-excitation sector
    and applies its eigendecomposition exponential.  Exact when every
    branch's excitation total fits below n_max (guaranteed by the same
    truncation contract as the fast path); intended for small instances.
    """
    if omega.num_nodes != state.num_modes:
        raise ValueError("coupling matrix size does not match the state")
    max_total = max((sum(modes) for (_, modes) in state.amplitudes), default=0)
    if max_total > state.n_max:
        raise TruncationError(f"branch exceeds n_max={state.n_max}")
    norm_before = state.norm()
    mat = omega.matrix
    edge_u, edge_v = omega.edge_arrays()

    sector_u: dict[int, tuple] = {}
    out: dict[Basis, complex] = {}
    groups: dict[tuple[tuple[int, ...], int], list[tuple[tuple[int, ...], complex]]] = {}
    for (aux, modes), amp in state.amplitudes.items():
        groups.setdefault((aux, sum(modes)), []).append((modes, amp))

    for (aux, total), entries in groups.items():
        if total not in sector_u:
            basis = sorted(_tuples_with_sum(state.num_modes, total, state.n_max))
            index = {b: i for i, b in enumerate(basis)}
            if len(basis) > 20_000:
                raise ResourceLimit("dense reference oracle is for small instances")
            h = np.zeros((len(basis), len(basis)))
            for i, occ in enumerate(basis):
                h[i, i] = sum(n * mat[v, v] for v, n in enumerate(occ))
                for u, v in zip(edge_u, edge_v):
                    for a, b in ((u, v), (v, u)):
                        if occ[b] > 0 and occ[a] < state.n_max:
                            target = list(occ)
                            target[b] -= 1
                            target[a] += 1
                            j = index[tuple(target)]
                            h[j, i] += mat[u, v] * math.sqrt((occ[a] + 1) * occ[b])
            eigvals, eigvecs = np.linalg.eigh(h)
            u_t = (eigvecs * np.exp(-1j * eigvals * t)) @ eigvecs.T
            sector_u[total] = (basis, index, u_t)
        basis, index, u_t = sector_u[total]
        vec = np.zeros(len(basis), dtype=np.complex128)
        for modes, amp in entries:
            vec[index[modes]] += amp
        vec = u_t @ vec
        for occ, amp in zip(basis, vec):
            key = (aux, occ)
            out[key] = out.get(key, 0j) + complex(amp)

    result = FockStateVector(num_modes=state.num_modes, senders=state.senders,
                             n_max=state.n_max, amplitudes=out)
    _check_norm_preserved(norm_before, result.norm())
    return result
