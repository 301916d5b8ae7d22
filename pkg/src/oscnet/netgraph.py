"""Network topologies and frequency programs.

A network is a graph of oscillator (or qubit) nodes with uniform coupling
``omega0`` on every edge and a programmable frequency on every node.  A
"program" assigns the node frequencies; the result is always a real
symmetric coupling matrix whose off-diagonal sparsity pattern matches the
topology exactly.

Conventions
-----------
* Hypercube nodes are indexed by the integer value of their bit-string,
  bit 0 being the least significant.  Nodes are adjacent iff their labels
  differ in exactly one bit.
* Frequencies are offsets from a rotating frame at 0 rad/s; only relative
  detunings matter for the dynamics (a global offset contributes a global
  phase).  Absolute carrier frequencies enter only in bandwidth accounting.
* Subcube-split sign convention: channel bit value 0 contributes
  ``+delta_omega/2`` to the node frequency, bit value 1 contributes
  ``-delta_omega/2``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np


def _frozen_array(arr, dtype=None) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class NetworkTopology:
    """An undirected graph of network nodes.

    ``edges`` is an (E, 2) int array with each row sorted ``u < v`` and the
    rows in lexicographic order; there are no self-loops or duplicates.
    ``d`` is the hypercube dimension (None for other kinds).
    """

    kind: str               # "hypercube" | "complete" | "custom"
    num_nodes: int
    edges: np.ndarray = field(repr=False)
    d: int | None = None

    def label(self, v: int) -> str:
        """Bit-string label of node ``v`` (hypercubes only), MSB first."""
        if self.d is None:
            raise ValueError("labels are defined only for hypercube topologies")
        if not 0 <= v < self.num_nodes:
            raise ValueError(f"node index {v} out of range")
        return format(v, f"0{self.d}b")

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def edge_set(self) -> set[tuple[int, int]]:
        """Edges as a set of (u, v) tuples with u < v."""
        return {(int(u), int(v)) for u, v in self.edges}


@dataclass(frozen=True)
class CouplingMatrix:
    """Real symmetric matrix of node frequencies (diagonal) and couplings.

    Entries are angular frequencies in rad/s.  Off-diagonal entry (u, v) is
    the uniform coupling on edge {u, v} and exactly zero off-edges.
    """

    num_nodes: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.num_nodes, self.num_nodes):
            raise ValueError("matrix shape does not match num_nodes")
        if not np.array_equal(m, m.T):
            raise ValueError("coupling matrix must be exactly symmetric")

    def fingerprint(self) -> str:
        """Stable hex digest of the matrix contents."""
        h = hashlib.sha1(self.matrix.tobytes())
        h.update(str(self.num_nodes).encode())
        return h.hexdigest()[:16]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Row/column indices of the upper-triangular nonzero couplings."""
        iu, iv = np.nonzero(np.triu(self.matrix, k=1))
        return iu.astype(np.int64), iv.astype(np.int64)


@dataclass(frozen=True)
class SubcubeSplit:
    """Programming of a d-cube into 2**m detuned channels.

    The ``channel_bits`` are detuned by ``delta_omega``; the remaining
    transfer bits carry the excitation between subcube corners.  The
    detuning ratio is ``eta = 2*omega0/delta_omega`` (0 for m = 0, the
    ideal fully-resonant limit).
    """

    d: int
    channel_bits: frozenset[int]
    delta_omega: float
    omega0: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"hypercube dimension must be >= 1, got {self.d}")
        bits = frozenset(int(b) for b in self.channel_bits)
        object.__setattr__(self, "channel_bits", bits)
        if any(b < 0 or b >= self.d for b in bits):
            raise ValueError(f"channel bits {sorted(bits)} out of range [0, {self.d})")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if bits and self.delta_omega <= 0:
            raise ValueError("delta_omega must be positive when channel bits are present")

    @property
    def m(self) -> int:
        return len(self.channel_bits)

    @property
    def num_nodes(self) -> int:
        return 1 << self.d

    @property
    def eta(self) -> float:
        """Detuning ratio 2*omega0/delta_omega; 0 in the ideal m = 0 limit."""
        if self.m == 0:
            return 0.0
        return 2.0 * self.omega0 / self.delta_omega

    @property
    def transfer_mask(self) -> int:
        """Bitmask of the transfer (non-channel) bit positions."""
        mask = (1 << self.d) - 1
        for b in self.channel_bits:
            mask ^= 1 << b
        return mask

    @classmethod
    def from_eta(cls, d: int, channel_bits, eta: float, omega0: float = 1.0) -> "SubcubeSplit":
        """Build a split with the detuning chosen to give the requested eta."""
        bits = frozenset(channel_bits)
        if bits:
            if eta <= 0:
                raise ValueError("eta must be positive when channel bits are present")
            delta = 2.0 * omega0 / eta
        else:
            delta = 0.0
        return cls(d=d, channel_bits=bits, delta_omega=delta, omega0=omega0)


@dataclass(frozen=True)
class PairingProgram:
    """Programming of a complete graph into N/2 resonant pairs.

    Pair k in ``matching`` order is assigned common node frequency
    ``k*delta_omega``: members of a pair are resonant, distinct pairs
    detuned by multiples of ``delta_omega``.
    """

    num_nodes: int
    matching: tuple[tuple[int, int], ...]
    delta_omega: float
    omega0: float

    def __post_init__(self):
        n = self.num_nodes
        if n < 2 or n % 2 != 0:
            raise ValueError(f"pairing requires an even node count >= 2, got {n}")
        pairs = tuple(tuple(sorted((int(a), int(b)))) for a, b in self.matching)
        object.__setattr__(self, "matching", pairs)
        seen: set[int] = set()
        for a, b in pairs:
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"invalid pair ({a}, {b})")
            if a in seen or b in seen:
                raise ValueError("matching is not disjoint")
            seen.update((a, b))
        if len(seen) != n:
            raise ValueError("matching does not cover all nodes")
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")
        if len(pairs) > 1 and self.delta_omega <= 0:
            raise ValueError("delta_omega must be positive with more than one pair")


def build_hypercube(d: int) -> NetworkTopology:
    """d-dimensional hypercube on 2**d nodes.

    Node index equals the integer value of its bit-string; u and v are
    adjacent iff they differ in exactly one bit, giving d*2**(d-1) edges.
    """
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise ValueError(f"dimension must be an integer, got {d!r}")
    if not 1 <= d <= 20:
        raise ValueError(f"hypercube dimension must be in [1, 20], got {d}")
    n = 1 << d
    nodes = np.arange(n, dtype=np.int64)
    chunks = []
    for j in range(d):
        u = nodes[(nodes >> j) & 1 == 0]
        chunks.append(np.column_stack((u, u | (1 << j))))
    edges = np.concatenate(chunks)
    edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
    return NetworkTopology(kind="hypercube", num_nodes=n, edges=_frozen_array(edges), d=int(d))


def build_complete(n: int) -> NetworkTopology:
    """Complete graph on n >= 2 nodes with all n(n-1)/2 edges."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"node count must be an integer, got {n!r}")
    if n < 2:
        raise ValueError(f"complete graph needs at least 2 nodes, got {n}")
    iu, iv = np.triu_indices(int(n), k=1)
    edges = np.column_stack((iu, iv)).astype(np.int64)
    return NetworkTopology(kind="complete", num_nodes=int(n), edges=_frozen_array(edges))


def build_custom(n: int, edges) -> NetworkTopology:
    """Topology from an explicit edge list (testing aid; uniform coupling only)."""
    if n < 1:
        raise ValueError("need at least one node")
    norm = []
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for {n} nodes")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        norm.append(key)
    norm.sort()
    arr = np.array(norm, dtype=np.int64).reshape(len(norm), 2)
    return NetworkTopology(kind="custom", num_nodes=int(n), edges=_frozen_array(arr))


def coupling_from_topology(top: NetworkTopology, omega0: float,
                           node_frequencies=None) -> CouplingMatrix:
    """Coupling matrix with uniform coupling omega0 and the given diagonal.

    ``node_frequencies`` defaults to all zeros (fully resonant network).
    """
    if omega0 <= 0:
        raise ValueError("omega0 must be positive")
    n = top.num_nodes
    m = np.zeros((n, n))
    if top.num_edges:
        u, v = top.edges[:, 0], top.edges[:, 1]
        m[u, v] = omega0
        m[v, u] = omega0
    if node_frequencies is not None:
        freqs = np.asarray(node_frequencies, dtype=float)
        if freqs.shape != (n,):
            raise ValueError("node_frequencies must have one entry per node")
        np.fill_diagonal(m, freqs)
    return CouplingMatrix(num_nodes=n, matrix=_frozen_array(m))


def subcube_frequencies(split: SubcubeSplit) -> np.ndarray:
    """Node frequencies under a subcube split.

    Node v gets (delta_omega/2) * sum over channel bits of (+1 if bit is 0
    else -1), so all nodes of one subcube share a frequency and adjacent
    subcubes are detuned by delta_omega.
    """
    nodes = np.arange(split.num_nodes, dtype=np.int64)
    freqs = np.zeros(split.num_nodes)
    for b in split.channel_bits:
        sign = 1.0 - 2.0 * ((nodes >> b) & 1)
        freqs += 0.5 * split.delta_omega * sign
    return freqs


def program_subcube_split(split: SubcubeSplit) -> CouplingMatrix:
    """Coupling matrix of a programmed hypercube.

    Off-diagonals are omega0 on every hypercube edge; the diagonal is the
    subcube frequency ladder of :func:`subcube_frequencies`.  The result
    is a sum of d commuting one-bit terms, which is what makes the
    factored evolution path exact.
    """
    top = build_hypercube(split.d)
    return coupling_from_topology(top, split.omega0, subcube_frequencies(split))


def program_pairing(program: PairingProgram) -> CouplingMatrix:
    """Coupling matrix of a complete graph programmed into resonant pairs.

    Off-diagonals are omega0 everywhere; pair k sits at frequency
    k*delta_omega, so the total diagonal spread is (N/2 - 1)*delta_omega.
    """
    n = program.num_nodes
    m = np.full((n, n), program.omega0)
    freqs = np.zeros(n)
    for k, (a, b) in enumerate(program.matching):
        freqs[a] = k * program.delta_omega
        freqs[b] = k * program.delta_omega
    np.fill_diagonal(m, freqs)
    return CouplingMatrix(num_nodes=n, matrix=_frozen_array(m))


def scatter_bits(value: int, positions) -> int:
    """Place the bits of ``value`` onto the given bit positions.

    Bit i of ``value`` lands on ``positions[i]``; positions are taken in
    the order given (ascending by convention throughout the package).
    """
    out = 0
    for i, p in enumerate(positions):
        if (value >> i) & 1:
            out |= 1 << p
    return out


def split_term_matrices(split: SubcubeSplit) -> list[np.ndarray]:
    """The d one-bit summands of a programmed hypercube coupling matrix.

    Term j is omega0*X(j) plus, for channel bits, (delta_omega/2)*Z(j),
    where X(j)/Z(j) act on bit j of the node label.  The terms commute
    pairwise and sum to the full coupling matrix.
    """
    n = split.num_nodes
    nodes = np.arange(n, dtype=np.int64)
    terms = []
    for j in range(split.d):
        t = np.zeros((n, n))
        flipped = nodes ^ (1 << j)
        t[nodes, flipped] = split.omega0
        if j in split.channel_bits:
            sign = 1.0 - 2.0 * ((nodes >> j) & 1)
            t[nodes, nodes] = 0.5 * split.delta_omega * sign
        terms.append(t)
    return terms
