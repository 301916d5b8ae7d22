"""Parallel quantum-state transfer and entanglement routing on
programmable oscillator/qubit networks (hypercubes and complete graphs).
"""

from .errors import ContractViolation, ResourceLimit, TruncationError
from .fidelity import (PairFidelity, complete_bound, crosstalk_angle,
                       crosstalk_sin2_from_evolution, find_resonances,
                       hypercube_bound, pair_fidelity_from_amplitude,
                       phase_correction)
from .fockoracle import (FockStateVector, QubitNetworkState, bell_fidelity,
                         evolve_oscillator, evolve_oscillator_dense_reference,
                         evolve_qubit, parallel_fidelities, prepare_initial,
                         prepare_initial_qubit, qubit_parallel_fidelities)
from .modevo import (ModeEvolution, evolve_hypercube_fast, evolve_modes,
                     transfer_amplitude, transfer_time)
from .netgraph import (CouplingMatrix, NetworkTopology, PairingProgram,
                       SubcubeSplit, build_complete, build_custom,
                       build_hypercube, coupling_from_topology,
                       program_pairing, program_subcube_split)
from .routing import (BandwidthBudget, DecoherenceParams, RateReport, Schedule,
                      TransferTask, complete_schedule, distribution_rate,
                      eta_from_bandwidth, figure3_sweep, mp_schedule,
                      qc_schedule)

__version__ = "0.1.0"
