"""Analytic transfer fidelities, cross-talk bounds, and resonance finding.

Cross-talk angle conventions
----------------------------
Two conventions exist for the oscillation angle that controls the
cross-talk factor sin^2(angle) in the hypercube bound:

* ``crosstalk_angle(eta)`` returns the dimensionless form
  sqrt(1 + 1/eta^2).  This is the documented default used by
  :func:`hypercube_bound`.
* ``crosstalk_sin2_from_evolution(eta)`` extracts sin^2 of the angle a
  detuned channel factor actually accumulates over one transfer window
  T = pi/(2*omega0), measured numerically from the exact 2x2 evolution.
  The accumulated angle is larger than the dimensionless form by the
  constant factor pi/2 (the transfer window in units of 1/omega0), which
  shifts where the revivals sit.  Resonance finding and exact-fidelity
  validation use this convention; see README for the discrepancy
  discussion.  The dimensionless default is kept as-is rather than
  silently rescaled.

Worst-case rate budgeting passes ``sin2_crosstalk=1.0`` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ContractViolation
from .modevo import evolve_hypercube_fast, transfer_amplitude, transfer_time
from .netgraph import SubcubeSplit

METHOD_ANALYTIC = "analytic-bound"
METHOD_AMPLITUDE = "amplitude"
METHOD_ORACLE = "exact-oracle"
_METHODS = (METHOD_ANALYTIC, METHOD_AMPLITUDE, METHOD_ORACLE)

LEAKAGE_TOL = 1e-10


@dataclass(frozen=True)
class PairFidelity:
    """Bell fidelity of one sender-receiver transfer."""

    sender: int
    receiver: int
    fidelity: float
    correction_phase: float
    method: str

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not 0.0 <= self.fidelity <= 1.0:
            raise ValueError(f"fidelity {self.fidelity} outside [0, 1]")


def pair_fidelity_from_amplitude(alpha: complex, sender: int = -1,
                                 receiver: int = -1) -> PairFidelity:
    """Single-sender Bell fidelity from a transfer amplitude.

    After correcting the known phase phi = -arg(alpha), the exact fidelity
    of the shared pair is F = ((1 + |alpha|)/2)^2: the |00> component
    always survives with weight 1/2, the |11> component with amplitude
    |alpha|, and their coherence contributes |alpha|/2.  Verified against
    the exact oracle in the test suite.
    """
    mag = abs(alpha)
    if mag > 1.0 + 1e-9:
        raise ValueError(f"amplitude magnitude {mag} exceeds 1")
    mag = min(mag, 1.0)
    phase = -math.atan2(alpha.imag, alpha.real) if mag > 0 else 0.0
    fid = ((1.0 + mag) / 2.0) ** 2
    return PairFidelity(sender=sender, receiver=receiver, fidelity=min(fid, 1.0),
                        correction_phase=phase % (2.0 * math.pi), method=METHOD_AMPLITUDE)


def crosstalk_angle(eta: float) -> float:
    """Dimensionless cross-talk angle sqrt(1 + 1/eta^2) (default convention)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return math.sqrt(1.0 + eta ** -2)


def _channel_factor(eta: float):
    """Exact 2x2 evolution of one detuned channel bit over a transfer window."""
    split = SubcubeSplit.from_eta(d=1, channel_bits=(0,), eta=eta, omega0=1.0)
    return evolve_hypercube_fast(split, transfer_time(1.0)).matrix


def channel_leakage(eta: float) -> float:
    """|off-diagonal| of the exact channel factor: residual inter-channel hop."""
    return abs(_channel_factor(eta)[0, 1])


def crosstalk_sin2_from_evolution(eta: float) -> float:
    """sin^2 of the accumulated cross-talk angle, from the exact 2x2 factor.

    The channel factor's off-diagonal magnitude is
    sin(angle) * eta / sqrt(1 + eta^2), so sin^2(angle) falls out of the
    measured leakage without assuming any closed form for the angle.
    """
    leak = channel_leakage(eta)
    return min(leak * leak * (1.0 + eta ** -2), 1.0)


def hypercube_bound(m: int, eta: float, *, sin2_crosstalk: float | None = None,
                    use_evolution_angle: bool = False) -> float:
    """Lower bound 1 - (3/2)*m*eta^2*sin^2(angle) on parallel-transfer fidelity.

    ``m`` is the channel-bit count; m = 0 returns 1 exactly.  The angle
    defaults to the dimensionless convention of :func:`crosstalk_angle`;
    pass ``use_evolution_angle=True`` for the accumulated-angle convention,
    or ``sin2_crosstalk`` (e.g. the worst case 1.0) to fix it outright.
    The perturbative formula goes negative for large eta, so the result is
    clamped to [0, 1]; with sin2_crosstalk=1 that triggers once
    eta >= sqrt(2/(3m)).
    """
    if m < 0:
        raise ValueError("channel count must be >= 0")
    if m == 0:
        return 1.0
    if eta <= 0:
        raise ValueError("eta must be positive for a programmed split")
    if sin2_crosstalk is None:
        if use_evolution_angle:
            sin2_crosstalk = crosstalk_sin2_from_evolution(eta)
        else:
            sin2_crosstalk = math.sin(crosstalk_angle(eta)) ** 2
    bound = 1.0 - 1.5 * m * eta * eta * sin2_crosstalk
    return min(max(bound, 0.0), 1.0)


def complete_bound(eta: float) -> float:
    """Lower bound 1 - (pi^2/2)*eta^2 for paired transfer on the complete graph.

    Independent of the node count; clamped to [0, 1] (goes negative once
    eta >= sqrt(2)/pi, the strong cross-talk regime).
    """
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    bound = 1.0 - 0.5 * math.pi ** 2 * eta * eta
    return min(max(bound, 0.0), 1.0)


def _signed_leakage(eta: float) -> float:
    # Off-diagonal of the channel factor is -i*sin(angle)*eta/sqrt(1+eta^2):
    # purely imaginary, so the imaginary part restores the sign that the
    # magnitude discards, giving a root-findable function.
    return float(_channel_factor(eta)[0, 1].imag)


def find_resonances(m: int, eta_range: tuple[float, float], count: int) -> list[float]:
    """Detunings where parallel transfer is exact, sorted descending in eta.

    Scans the signed per-channel-bit leakage for sign changes and polishes
    each root with Brent's method; at a returned eta* the exact channel
    factor is diagonal to 1e-10, so every subcube evolves independently
    and the parallel fidelity is 1 to all orders in eta.  Channels share
    the same per-bit factor, so the roots do not depend on m (m is
    accepted for symmetry with the bound and validated).  Returns an empty
    list when the range contains no resonance.
    """
    if m < 1:
        raise ValueError("resonances require at least one channel bit")
    lo, hi = float(eta_range[0]), float(eta_range[1])
    if not (0.0 < lo < hi <= 2.0):
        raise ValueError(f"eta range must be a nonempty interval within (0, 2], got {eta_range}")
    if count < 1:
        raise ValueError("count must be >= 1")

    # The leakage oscillates roughly like sin(c/eta); a log grid with step
    # ~lo/4 per decade point keeps adjacent samples within a quarter cycle.
    points = int(min(2e5, max(64, 8.0 * math.log(hi / lo) / lo)))
    grid = np.geomspace(lo, hi, points)
    values = [_signed_leakage(x) for x in grid]

    roots: list[float] = []
    for i in range(points - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            roots.append(float(grid[i]))
        elif a * b < 0.0:
            roots.append(float(brentq(_signed_leakage, grid[i], grid[i + 1],
                                      xtol=1e-15, rtol=8.9e-16)))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))

    roots = [r for r in roots if channel_leakage(r) <= LEAKAGE_TOL]
    roots.sort(reverse=True)
    return roots[:count]


def phase_correction(split: SubcubeSplit, s: int, r: int, t: float) -> float:
    """Correction phase -arg(alpha) for a subcube-antipodal pair, in [0, 2*pi)."""
    n = split.num_nodes
    if not (0 <= s < n and 0 <= r < n):
        raise IndexError(f"node pair ({s}, {r}) out of range")
    if r != s ^ split.transfer_mask:
        raise ContractViolation(
            f"nodes {s} and {r} are not antipodal within their subcube "
            f"(transfer mask {split.transfer_mask:#x})")
    alpha = transfer_amplitude(evolve_hypercube_fast(split, t), s, r)
    return (-math.atan2(alpha.imag, alpha.real)) % (2.0 * math.pi)
