"""Entanglement-distribution schedules and rate accounting.

Three schemes distribute entanglement between every pair of nodes:

* QC (qubit-compatible) on the hypercube: one transfer per subcube channel
  per round, every splitting used once per antipodal class.
* MP (massively parallel) on the hypercube: every node sends to its
  subcube antipode simultaneously, one round per splitting.  Oscillator
  networks only.
* COMPLETE: round-robin over the complete graph; each round pairs all
  nodes via the circle-method 1-factorization and each matched pair swaps
  in both directions.

Rate convention: the distribution rate sums DIRECTED transfer events
weighted by fidelity.  QC emits one directed event per antipodal use
(one per unordered pair over the whole schedule); MP and COMPLETE emit
two per pair.  Decoherence enters as a single multiplicative attenuation
per scheme: exp(-T/T2) for the single-excitation schemes (QC, COMPLETE),
exp(-T/T1) for MP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .fidelity import complete_bound, hypercube_bound
from .modevo import transfer_time

SCHEME_QC = "QC"
SCHEME_MP = "MP"
SCHEME_COMPLETE = "COMPLETE"

FIG3_OMEGA0 = 2.0 * math.pi * 20e6      # rad/s, 20 MHz coupling
FIG3_BANDWIDTH = 2.0 * math.pi * 2e9    # rad/s, 2 GHz budget


@dataclass(frozen=True)
class TransferTask:
    """One directed transfer within a round."""

    sender: int
    receiver: int
    channel: int
    correction_phase: float  # ideal (fully detuned channels) value

    def __post_init__(self):
        if self.sender == self.receiver:
            raise ValueError("sender and receiver must differ")

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.sender, self.receiver), max(self.sender, self.receiver))


@dataclass(frozen=True)
class Round:
    """One network use: a frequency program plus simultaneous tasks."""

    index: int
    tasks: tuple[TransferTask, ...]
    m: int | None = None                      # hypercube: channel-bit count
    channel_bits: tuple[int, ...] | None = None
    matching: tuple[tuple[int, int], ...] | None = None  # complete rounds


@dataclass(frozen=True)
class Schedule:
    scheme: str
    num_nodes: int
    rounds: tuple[Round, ...]
    d: int | None = None

    @property
    def num_rounds(self) -> int:
        return len(self.rounds)

    @property
    def num_tasks(self) -> int:
        return sum(len(r.tasks) for r in self.rounds)

    def distribution_time(self, omega0: float) -> float:
        """T_D = rounds * pi/(2*omega0)."""
        return self.num_rounds * transfer_time(omega0)

    def covered_pairs(self) -> dict[tuple[int, int], int]:
        """How many directed tasks touch each unordered pair."""
        counts: dict[tuple[int, int], int] = {}
        for r in self.rounds:
            for task in r.tasks:
                counts[task.pair] = counts.get(task.pair, 0) + 1
        return counts

    def validate(self):
        """Check the per-scheme structural invariants and pair coverage."""
        n = self.num_nodes
        for r in self.rounds:
            senders = [t.sender for t in r.tasks]
            receivers = [t.receiver for t in r.tasks]
            if self.scheme == SCHEME_QC:
                if len(r.tasks) != 1 << r.m:
                    raise ValueError(f"QC round {r.index}: expected one task per channel")
                if sorted(t.channel for t in r.tasks) != list(range(1 << r.m)):
                    raise ValueError(f"QC round {r.index}: channels not distinct")
            elif self.scheme == SCHEME_MP:
                if sorted(senders) != list(range(n)):
                    raise ValueError(f"MP round {r.index}: every node must send once")
            elif self.scheme == SCHEME_COMPLETE:
                if sorted(senders) != list(range(n)) or sorted(receivers) != list(range(n)):
                    raise ValueError(f"complete round {r.index}: not a perfect matching")
                directed = {(t.sender, t.receiver) for t in r.tasks}
                if any((b, a) not in directed for a, b in directed):
                    raise ValueError(f"complete round {r.index}: missing reverse transfers")
            else:
                raise ValueError(f"unknown scheme {self.scheme!r}")
        missing = {(u, v) for u in range(n) for v in range(u + 1, n)} - set(self.covered_pairs())
        if missing:
            raise ValueError(f"schedule does not cover pairs {sorted(missing)[:4]}...")
        return self


def _hypercube_splittings(d: int):
    """All (m, channel_bits) splittings: ascending m, lexicographic bit sets."""
    for m in range(d):
        for bits in combinations(range(d), m):
            yield m, bits


def _scatter(value: int, positions) -> int:
    out = 0
    for i, p in enumerate(positions):
        if (value >> i) & 1:
            out |= 1 << p
    return out


def _ideal_phase(subcube_dim: int) -> float:
    # Corner-to-corner transfer contributes a factor (-i) per transfer bit.
    return (subcube_dim * math.pi / 2.0) % (2.0 * math.pi)


def qc_schedule(d: int) -> Schedule:
    """Qubit-compatible hypercube schedule: (3^d - 1)/2 rounds.

    For each splitting, one round per antipodal class of the subcubes,
    each round carrying exactly one directed task per channel, all in the
    same direction.  Every unordered pair is covered exactly once.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    full = (1 << d) - 1
    rounds = []
    for m, bits in _hypercube_splittings(d):
        channel_pos = list(bits)
        transfer_pos = sorted(set(range(d)) - set(bits))
        tmask = full ^ _scatter((1 << m) - 1, channel_pos)
        phase = _ideal_phase(d - m)
        for pattern in range(0, 1 << (d - m), 2):  # even = class representative
            tasks = []
            offset = _scatter(pattern, transfer_pos)
            for c in range(1 << m):
                sender = _scatter(c, channel_pos) | offset
                tasks.append(TransferTask(sender=sender, receiver=sender ^ tmask,
                                          channel=c, correction_phase=phase))
            rounds.append(Round(index=len(rounds), tasks=tuple(tasks), m=m,
                                channel_bits=tuple(bits)))
    return Schedule(scheme=SCHEME_QC, num_nodes=1 << d, rounds=tuple(rounds), d=d)


def mp_schedule(d: int) -> Schedule:
    """Massively parallel hypercube schedule: 2^d - 1 rounds.

    One round per splitting with every node sending to its subcube
    antipode, so each ordered pair is covered exactly once overall.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    n = 1 << d
    full = n - 1
    rounds = []
    for m, bits in _hypercube_splittings(d):
        channel_pos = list(bits)
        tmask = full ^ _scatter((1 << m) - 1, channel_pos)
        phase = _ideal_phase(d - m)
        tasks = []
        for sender in range(n):
            channel = sum(((sender >> b) & 1) << i for i, b in enumerate(channel_pos))
            tasks.append(TransferTask(sender=sender, receiver=sender ^ tmask,
                                      channel=channel, correction_phase=phase))
        rounds.append(Round(index=len(rounds), tasks=tuple(tasks), m=m,
                            channel_bits=tuple(bits)))
    return Schedule(scheme=SCHEME_MP, num_nodes=n, rounds=tuple(rounds), d=d)


def circle_matching(n: int, round_index: int) -> tuple[tuple[int, int], ...]:
    """Round ``round_index`` of the circle-method 1-factorization of K_n.

    Node n-1 stays fixed; the others rotate.  The n-1 rounds form a valid
    1-factorization: every pair appears in exactly one round.
    """
    if n < 2 or n % 2:
        raise ValueError("circle method needs an even node count >= 2")
    if not 0 <= round_index < n - 1:
        raise ValueError(f"round index {round_index} out of range")
    k = round_index
    pairs = [(n - 1, k % (n - 1))]
    for i in range(1, n // 2):
        pairs.append(((k + i) % (n - 1), (k - i) % (n - 1)))
    return tuple(tuple(sorted(p)) for p in pairs)


def complete_schedule(n: int) -> Schedule:
    """Round-robin schedule on the complete graph: N - 1 rounds.

    Each round's perfect matching swaps every matched pair in both
    directions (two directed tasks per pair).
    """
    if n % 2:
        raise ValueError("the pairing scheme requires an even node count")
    if n < 2:
        raise ValueError("need at least 2 nodes")
    phase = math.pi / 2.0  # resonant pair swap is -i
    rounds = []
    for k in range(n - 1):
        matching = circle_matching(n, k)
        tasks = []
        for channel, (a, b) in enumerate(matching):
            tasks.append(TransferTask(sender=a, receiver=b, channel=channel,
                                      correction_phase=phase))
            tasks.append(TransferTask(sender=b, receiver=a, channel=channel,
                                      correction_phase=phase))
        rounds.append(Round(index=k, tasks=tuple(tasks), matching=matching))
    return Schedule(scheme=SCHEME_COMPLETE, num_nodes=n, rounds=tuple(rounds))


@dataclass(frozen=True)
class BandwidthBudget:
    """Total angular-frequency window available for detuning programs."""

    omega_min: float
    omega_max: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("bandwidth window must have positive width")

    @property
    def width(self) -> float:
        return self.omega_max - self.omega_min

    @classmethod
    def from_width(cls, width: float) -> "BandwidthBudget":
        return cls(omega_min=0.0, omega_max=width)


@dataclass(frozen=True)
class DecoherenceParams:
    """Dissipation (T1) and dephasing (T2) times, seconds."""

    t1: float | None = None
    t2: float | None = None

    def __post_init__(self):
        if self.t1 is not None and self.t1 <= 0:
            raise ValueError("T1 must be positive")
        if self.t2 is not None and self.t2 <= 0:
            raise ValueError("T2 must be positive")


def eta_for_split(m: int, omega0: float, budget: BandwidthBudget | None) -> float:
    """Detuning ratio for a hypercube splitting with m channel bits.

    The splitting spends the whole window on m detuning steps
    (delta_omega = W/m), so eta = 2*omega0*m/W; m = 0 is the ideal limit.
    """
    if m == 0 or budget is None:
        return 0.0
    return 2.0 * omega0 * m / budget.width


def eta_for_complete(n: int, omega0: float, budget: BandwidthBudget | None) -> float:
    """Detuning ratio for the paired complete graph: N/2 steps across W."""
    if budget is None:
        return 0.0
    return omega0 * n / budget.width


def eta_from_bandwidth(scheme: str, size: int, omega0: float,
                       budget: BandwidthBudget | None):
    """Per-splitting detuning ratios implied by a bandwidth budget.

    Hypercube schemes (size = d) get a dict {m: eta} over their
    splittings; the complete scheme (size = N) a single float.
    """
    if scheme in (SCHEME_QC, SCHEME_MP):
        return {m: eta_for_split(m, omega0, budget) for m in range(size)}
    if scheme == SCHEME_COMPLETE:
        return eta_for_complete(size, omega0, budget)
    raise ValueError(f"unknown scheme {scheme!r}")


@dataclass(frozen=True)
class RateReport:
    """Fidelity-weighted distribution rate of one schedule."""

    scheme: str
    num_nodes: int
    num_rounds: int
    transfer_window: float        # T, seconds
    distribution_time: float      # T_D, seconds
    total_weighted_pairs: float   # sum of task fidelities, attenuated
    rate: float                   # 1/s
    rate_per_window: float        # in units of 1/T
    eta: float                    # worst (largest) eta used
    attenuation: float
    min_pair_fidelity: float      # worst per-task analytic fidelity


def _round_fidelity(schedule: Schedule, rnd: Round, omega0: float,
                    budget: BandwidthBudget | None, exploit_resonances: bool) -> tuple[float, float]:
    """(per-task fidelity, eta) for one round under the analytic model."""
    if schedule.scheme == SCHEME_COMPLETE:
        eta = eta_for_complete(schedule.num_nodes, omega0, budget)
        return complete_bound(eta), eta
    eta = eta_for_split(rnd.m, omega0, budget)
    if rnd.m == 0 or eta == 0.0:
        return 1.0, eta
    if exploit_resonances:
        return hypercube_bound(rnd.m, eta, use_evolution_angle=True), eta
    return hypercube_bound(rnd.m, eta, sin2_crosstalk=1.0), eta


def attenuation_factor(scheme: str, omega0: float,
                       decoherence: DecoherenceParams | None) -> float:
    """exp(-T/T2) for single-excitation schemes, exp(-T/T1) for MP."""
    if decoherence is None:
        return 1.0
    t = transfer_time(omega0)
    lifetime = decoherence.t1 if scheme == SCHEME_MP else decoherence.t2
    if lifetime is None:
        return 1.0
    return math.exp(-t / lifetime)


def distribution_rate(schedule: Schedule, omega0: float,
                      budget: BandwidthBudget | None = None,
                      decoherence: DecoherenceParams | None = None,
                      exploit_resonances: bool = False) -> RateReport:
    """Fidelity-weighted rate of a schedule under the analytic model.

    Per-task fidelities default to the worst-case cross-talk bounds
    (sin^2 = 1); ``exploit_resonances`` switches to the oscillating
    accumulated-angle value instead.  The decoherence factor multiplies
    the ideal rate exactly once, so enabling it rescales the report by
    exactly exp(-T/T1) or exp(-T/T2).
    """
    t_window = transfer_time(omega0)
    sum_f = 0.0
    worst_eta = 0.0
    min_f = 1.0
    for rnd in schedule.rounds:
        f, eta = _round_fidelity(schedule, rnd, omega0, budget, exploit_resonances)
        sum_f += len(rnd.tasks) * f
        worst_eta = max(worst_eta, eta)
        min_f = min(min_f, f)
    atten = attenuation_factor(schedule.scheme, omega0, decoherence)
    t_d = schedule.distribution_time(omega0)
    rate_per_window = (sum_f / schedule.num_rounds) * atten
    rate = (sum_f / t_d) * atten
    return RateReport(scheme=schedule.scheme, num_nodes=schedule.num_nodes,
                      num_rounds=schedule.num_rounds, transfer_window=t_window,
                      distribution_time=t_d, total_weighted_pairs=sum_f * atten,
                      rate=rate, rate_per_window=rate_per_window, eta=worst_eta,
                      attenuation=atten, min_pair_fidelity=min_f)


def rate_rows(schedule: Schedule, omega0: float,
              budget: BandwidthBudget | None = None,
              decoherence: DecoherenceParams | None = None,
              exploit_resonances: bool = False) -> list[dict]:
    """Per-round export rows (scheme, N, d, m, round, T_D, sumF, R, eta, attenuation)."""
    report = distribution_rate(schedule, omega0, budget, decoherence, exploit_resonances)
    rows = []
    for rnd in schedule.rounds:
        f, eta = _round_fidelity(schedule, rnd, omega0, budget, exploit_resonances)
        rows.append({
            "scheme": schedule.scheme,
            "N": schedule.num_nodes,
            "d": schedule.d if schedule.d is not None else "",
            "m": rnd.m if rnd.m is not None else "",
            "round": rnd.index,
            "T_D": report.distribution_time,
            "sumF": len(rnd.tasks) * f * report.attenuation,
            "R": report.rate,
            "eta": eta,
            "attenuation": report.attenuation,
        })
    return rows


def figure3_sweep(max_nodes: int = 1024, omega0: float = FIG3_OMEGA0,
                  budget: BandwidthBudget | None = None,
                  decoherence: DecoherenceParams | None = None) -> list[dict]:
    """Rate-vs-size table for all three schemes.

    Hypercube points sit at N = 2^d; the complete graph is evaluated on
    even N (up to 128 by default, where its clamped rate has long hit 0).
    Defaults reproduce the 20 MHz coupling / 2 GHz bandwidth setting.
    """
    if budget is None:
        budget = BandwidthBudget.from_width(FIG3_BANDWIDTH)
    rows = []

    def add(report: RateReport, d: int | None):
        rows.append({
            "scheme": report.scheme,
            "N": report.num_nodes,
            "d": d if d is not None else "",
            "rounds": report.num_rounds,
            "T_D": report.distribution_time,
            "sum_fidelity": report.total_weighted_pairs,
            "rate_per_T": report.rate_per_window,
            "rate_hz": report.rate,
            "eta": report.eta,
            "attenuation": report.attenuation,
            "min_pair_fidelity": report.min_pair_fidelity,
        })

    d = 1
    while (1 << d) <= max_nodes:
        for builder in (mp_schedule, qc_schedule):
            sched = builder(d)
            add(distribution_rate(sched, omega0, budget, decoherence), d)
        d += 1
    for n in range(2, min(max_nodes, 128) + 1, 2):
        add(distribution_rate(complete_schedule(n), omega0, budget, decoherence), None)
    return rows
