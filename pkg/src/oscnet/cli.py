"""Command-line front end.

Subcommands: evolve, fidelity-sweep, schedule, rate, figure2, figure3.
Every subcommand accepts ``--config FILE`` (YAML or JSON); flags mirror
config keys one-to-one and override file values.  CSV output uses '.'
decimals and 12 significant digits; identical config and seed give
byte-identical files.  ``OSCNET_WORKERS`` caps the sweep worker pool.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np
import yaml

from . import fockoracle, routing
from .errors import ContractViolation, ResourceLimit
from .fidelity import hypercube_bound, pair_fidelity_from_amplitude
from .modevo import dump_kmatrix, evolve_modes, transfer_amplitude, transfer_time
from .netgraph import SubcubeSplit
from .serialize import DocumentError, load_network

FIG2_DIMS = (2, 3, 4, 5, 6)
SCHEMES = {"qc": routing.SCHEME_QC, "mp": routing.SCHEME_MP,
           "complete": routing.SCHEME_COMPLETE}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Resolved settings for one experiment run."""

    experiment: str
    d: int | None = None
    n: int | None = None
    m: int | None = None
    scheme: str | None = None
    eta_min: float | None = None
    eta_max: float | None = None
    eta_points: int | None = None
    dims: tuple[int, ...] | None = None
    omega0_mhz: float = 20.0
    bandwidth_ghz: float | None = 2.0
    t1: float | None = None
    t2: float | None = None
    max_nodes: int = 1024
    network: str | None = None
    time: float | None = None
    windows: float | None = None
    sender: int | None = None
    receiver: int | None = None
    exact: bool = False
    resonant: bool = False
    out: str | None = None
    format: str = "csv"
    seed: int | None = None

    @property
    def omega0(self) -> float:
        """Coupling in rad/s."""
        return 2.0 * math.pi * self.omega0_mhz * 1e6

    def budget(self) -> routing.BandwidthBudget | None:
        if self.bandwidth_ghz is None:
            return None
        return routing.BandwidthBudget.from_width(2.0 * math.pi * self.bandwidth_ghz * 1e9)

    def decoherence(self) -> routing.DecoherenceParams | None:
        if self.t1 is None and self.t2 is None:
            return None
        return routing.DecoherenceParams(t1=self.t1, t2=self.t2)

    def eta_grid(self) -> np.ndarray:
        if self.eta_points is None or self.eta_points < 1:
            raise ConfigError("eta grid is empty (eta_points must be >= 1)")
        if self.eta_min is None or self.eta_max is None:
            raise ConfigError("eta_min and eta_max are required")
        if not 0.0 < self.eta_min <= self.eta_max:
            raise ConfigError("need 0 < eta_min <= eta_max")
        if self.eta_points == 1:
            return np.array([self.eta_min])
        return np.geomspace(self.eta_min, self.eta_max, self.eta_points)

    def validate_positive(self):
        for name in ("omega0_mhz", "bandwidth_ghz", "t1", "t2", "time", "windows"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")


def _load_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as err:
            raise ConfigError(f"{path}: not valid YAML/JSON: {err}") from err
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    return doc


def _resolve_config(args: argparse.Namespace, experiment: str) -> ExperimentConfig:
    file_values: dict = {}
    if args.config:
        file_values = _load_config_file(args.config)
        declared = file_values.pop("experiment", None)
        if declared is not None and declared != experiment:
            raise ConfigError(
                f"{args.config}: config is for experiment {declared!r}, "
                f"but the {experiment!r} subcommand was invoked")
    known = {f.name for f in fields(ExperimentConfig)} - {"experiment"}
    unknown = set(file_values) - known
    if unknown:
        raise ConfigError(f"{args.config}: unknown config keys {sorted(unknown)}")

    cfg = ExperimentConfig(experiment=experiment)
    for f in fields(ExperimentConfig):
        if f.name == "experiment":
            continue
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            setattr(cfg, f.name, flag_value)
        elif f.name in file_values and file_values[f.name] is not None:
            setattr(cfg, f.name, file_values[f.name])
    if isinstance(cfg.dims, str):
        cfg.dims = tuple(int(x) for x in cfg.dims.split(","))
    elif isinstance(cfg.dims, (list, tuple)):
        cfg.dims = tuple(int(x) for x in cfg.dims)
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    cfg.validate_positive()
    if cfg.seed is not None:
        np.random.seed(cfg.seed & 0xFFFFFFFF)
    return cfg


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_rows(out: str | None, fieldnames: list[str], rows: list[dict], fmt: str):
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        lines = [",".join(fieldnames)]
        for row in rows:
            lines.append(",".join(_fmt(row[name]) for name in fieldnames))
        text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {out}")


def _workers() -> int:
    env = os.environ.get("OSCNET_WORKERS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def _parallel_map(func, jobs: list):
    count = _workers()
    if count <= 1 or len(jobs) <= 1:
        return [func(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=count) as pool:
        return list(pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * count))))


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_evolve(cfg: ExperimentConfig) -> int:
    if cfg.network is None:
        raise ConfigError("evolve needs --network FILE")
    _, coupling, _ = load_network(cfg.network)
    omega0 = _uniform_omega0(coupling)
    if cfg.time is not None:
        t = cfg.time
    elif cfg.windows is not None:
        t = cfg.windows * transfer_time(omega0)
    else:
        t = transfer_time(omega0)
    evo = evolve_modes(coupling, t)
    if cfg.sender is not None and cfg.receiver is not None:
        alpha = transfer_amplitude(evo, cfg.sender, cfg.receiver)
        pf = pair_fidelity_from_amplitude(alpha, cfg.sender, cfg.receiver)
        row = {"sender": cfg.sender, "receiver": cfg.receiver, "time": t,
               "amplitude_re": alpha.real, "amplitude_im": alpha.imag,
               "magnitude": abs(alpha), "correction_phase": pf.correction_phase,
               "pair_fidelity": pf.fidelity}
        _write_rows(cfg.out, list(row), [row], cfg.format)
        return 0
    text = dump_kmatrix(evo)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {evo.num_nodes}x{evo.num_nodes} evolution matrix to {cfg.out}")
    return 0


def _uniform_omega0(coupling) -> float:
    u, v = coupling.edge_arrays()
    if u.size == 0:
        raise ConfigError("network has no edges")
    return float(coupling.matrix[u[0], v[0]])


def _cmd_fidelity_sweep(cfg: ExperimentConfig) -> int:
    if cfg.d is None:
        raise ConfigError("fidelity-sweep needs --d")
    m = cfg.m if cfg.m is not None else 1
    if not 1 <= m <= cfg.d - 1:
        raise ConfigError(f"channel count m={m} must satisfy 1 <= m <= d-1")
    grid = cfg.eta_grid()
    if cfg.exact and cfg.d > 4:
        raise ConfigError("exact oracle sweeps are capped at d = 4")
    rows = []
    t = transfer_time(1.0)
    for eta in grid:
        row = {
            "eta": float(eta),
            "bound": hypercube_bound(m, eta),
            "bound_worst": hypercube_bound(m, eta, sin2_crosstalk=1.0),
            "bound_accumulated": hypercube_bound(m, eta, use_evolution_angle=True),
        }
        if cfg.exact:
            split = SubcubeSplit.from_eta(cfg.d, channel_bits=tuple(range(m)), eta=float(eta))
            senders, receivers = fockoracle.same_direction_pairs(split)
            fids = fockoracle.parallel_fidelities(senders, receivers, split, t)
            row["exact_min"] = min(f.fidelity for f in fids)
        rows.append(row)
    _write_rows(cfg.out, list(rows[0]), rows, cfg.format)
    return 0


def _build_schedule(cfg: ExperimentConfig) -> routing.Schedule:
    if cfg.scheme is None:
        raise ConfigError("need --scheme qc|mp|complete")
    scheme = SCHEMES[cfg.scheme]
    if scheme == routing.SCHEME_COMPLETE:
        if cfg.n is None:
            raise ConfigError("complete scheme needs --n")
        return routing.complete_schedule(cfg.n)
    if cfg.d is None:
        raise ConfigError("hypercube schemes need --d")
    return routing.qc_schedule(cfg.d) if scheme == routing.SCHEME_QC else routing.mp_schedule(cfg.d)


def _cmd_schedule(cfg: ExperimentConfig) -> int:
    sched = _build_schedule(cfg).validate()
    rows = routing.rate_rows(sched, cfg.omega0, cfg.budget(), cfg.decoherence(),
                             exploit_resonances=cfg.resonant)
    _write_rows(cfg.out, list(rows[0]), rows, cfg.format)
    return 0


def _cmd_rate(cfg: ExperimentConfig) -> int:
    sched = _build_schedule(cfg)
    report = routing.distribution_rate(sched, cfg.omega0, cfg.budget(), cfg.decoherence(),
                                       exploit_resonances=cfg.resonant)
    row = {
        "scheme": report.scheme, "N": report.num_nodes,
        "d": sched.d if sched.d is not None else "",
        "rounds": report.num_rounds, "T": report.transfer_window,
        "T_D": report.distribution_time,
        "sum_weighted_fidelity": report.total_weighted_pairs,
        "rate_hz": report.rate, "rate_per_T": report.rate_per_window,
        "eta": report.eta, "attenuation": report.attenuation,
        "min_pair_fidelity": report.min_pair_fidelity,
    }
    _write_rows(cfg.out, list(row), [row], cfg.format)
    return 0


def _figure2_point(job: tuple[int, float]) -> float:
    d, eta = job
    split = SubcubeSplit.from_eta(d, channel_bits=(d - 1,), eta=eta, omega0=1.0)
    senders, receivers = fockoracle.same_direction_pairs(split)
    fids = fockoracle.qubit_parallel_fidelities(senders, receivers, split,
                                                transfer_time(1.0))
    return min(f.fidelity for f in fids)


def _cmd_figure2(cfg: ExperimentConfig) -> int:
    if cfg.eta_min is None:
        cfg.eta_min, cfg.eta_max = 0.01, 1.0
        cfg.eta_points = cfg.eta_points or 200
    dims = cfg.dims or FIG2_DIMS
    if any(d < 2 for d in dims):
        raise ConfigError("figure2 needs hypercube dimensions >= 2")
    grid = cfg.eta_grid()
    jobs = [(d, float(eta)) for d in dims for eta in grid]
    values = _parallel_map(_figure2_point, jobs)
    table: dict[float, dict] = {float(eta): {"eta": float(eta)} for eta in grid}
    for (d, eta), value in zip(jobs, values):
        table[eta][f"qubit_d{d}"] = value
    for eta in table:
        table[eta]["bound_m1"] = hypercube_bound(1, eta, use_evolution_angle=True)
    fieldnames = ["eta"] + [f"qubit_d{d}" for d in dims] + ["bound_m1"]
    rows = [table[float(eta)] for eta in grid]
    _write_rows(cfg.out, fieldnames, rows, cfg.format)
    return 0


def _cmd_figure3(cfg: ExperimentConfig) -> int:
    rows = routing.figure3_sweep(max_nodes=cfg.max_nodes, omega0=cfg.omega0,
                                 budget=cfg.budget(), decoherence=cfg.decoherence())
    _write_rows(cfg.out, list(rows[0]), rows, cfg.format)
    return 0


_COMMANDS = {
    "evolve": _cmd_evolve,
    "fidelity-sweep": _cmd_fidelity_sweep,
    "schedule": _cmd_schedule,
    "rate": _cmd_rate,
    "figure2": _cmd_figure2,
    "figure3": _cmd_figure3,
}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML/JSON config file; flags override it")
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--seed", type=int, help="seed for randomized experiment variants")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscnet",
        description="Parallel state transfer and entanglement routing on "
                    "programmable oscillator/qubit networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="mode-evolution matrix of a network document")
    p.add_argument("--network", help="network document (YAML)")
    p.add_argument("--time", type=float, help="evolution time in seconds")
    p.add_argument("--windows", type=float, help="evolution time in transfer windows")
    p.add_argument("--sender", type=int, help="emit transfer amplitude from this node")
    p.add_argument("--receiver", type=int, help="... to this node")
    _add_common(p)

    p = sub.add_parser("fidelity-sweep", help="cross-talk bounds (and exact oracle) vs eta")
    p.add_argument("--d", type=int, help="hypercube dimension")
    p.add_argument("--m", type=int, help="channel-bit count (default 1)")
    p.add_argument("--eta-min", dest="eta_min", type=float)
    p.add_argument("--eta-max", dest="eta_max", type=float)
    p.add_argument("--eta-points", dest="eta_points", type=int)
    p.add_argument("--exact", action=argparse.BooleanOptionalAction,
                   help="add the exact oracle fidelity column (d <= 4)")
    _add_common(p)

    for name, blurb in (("schedule", "per-round schedule table"),
                        ("rate", "distribution-rate summary")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--scheme", choices=sorted(SCHEMES))
        p.add_argument("--d", type=int, help="hypercube dimension (qc/mp)")
        p.add_argument("--n", type=int, help="node count (complete)")
        p.add_argument("--omega0-mhz", dest="omega0_mhz", type=float)
        p.add_argument("--bandwidth-ghz", dest="bandwidth_ghz", type=float)
        p.add_argument("--t1", type=float, help="dissipation time, seconds")
        p.add_argument("--t2", type=float, help="dephasing time, seconds")
        p.add_argument("--resonant", action=argparse.BooleanOptionalAction,
                       help="use resonance-exploiting fidelities instead of worst case")
        _add_common(p)

    p = sub.add_parser("figure2", help="qubit parallel-transfer fidelity curves vs eta")
    p.add_argument("--dims", help="comma-separated hypercube dimensions (default 2,3,4,5,6)")
    p.add_argument("--eta-min", dest="eta_min", type=float)
    p.add_argument("--eta-max", dest="eta_max", type=float)
    p.add_argument("--eta-points", dest="eta_points", type=int)
    _add_common(p)

    p = sub.add_parser("figure3", help="distribution rate vs network size, all schemes")
    p.add_argument("--max-nodes", dest="max_nodes", type=int)
    p.add_argument("--omega0-mhz", dest="omega0_mhz", type=float)
    p.add_argument("--bandwidth-ghz", dest="bandwidth_ghz", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args, args.command)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, DocumentError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (ContractViolation, ResourceLimit, FloatingPointError, ValueError,
            IndexError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entrypoint():  # console_scripts hook
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
