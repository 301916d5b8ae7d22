"""Versioned network/program documents (YAML) consumed by the CLI.

Schema ``oscnet-network/1`` (see docs/file-formats.md):

    format: oscnet-network/1
    kind: hypercube | complete | custom
    d: <int>                 # hypercube only
    N: <int>                 # complete/custom only
    edges: [[u, v], ...]     # custom only
    omega0: <rad/s>
    program:                 # optional; omitted = fully resonant
      type: subcube-split | pairing | frequencies
      channel_bits: [..]     # subcube-split
      delta_omega: <rad/s>   # subcube-split / pairing
      matching: [[a, b], ..] # pairing
      values: [..]           # frequencies, one per node
"""

from __future__ import annotations

import yaml

from .netgraph import (CouplingMatrix, NetworkTopology, PairingProgram, SubcubeSplit,
                       build_complete, build_custom, build_hypercube,
                       coupling_from_topology, program_pairing, program_subcube_split,
                       subcube_frequencies)

FORMAT_NETWORK = "oscnet-network/1"


class DocumentError(ValueError):
    """A structured-text document failed validation."""

    def __init__(self, message: str, path: str | None = None):
        prefix = f"{path}: " if path else ""
        super().__init__(prefix + message)


def _require(doc: dict, key: str, path: str | None):
    if key not in doc:
        raise DocumentError(f"missing required key {key!r}", path)
    return doc[key]


def parse_network_doc(doc: dict, path: str | None = None
                      ) -> tuple[NetworkTopology, CouplingMatrix, SubcubeSplit | None]:
    """Build the topology and programmed coupling matrix from a document.

    Returns the split object too when the program is a subcube split, so
    callers can reuse the factored evolution path.
    """
    if not isinstance(doc, dict):
        raise DocumentError("document must be a mapping", path)
    fmt = _require(doc, "format", path)
    if fmt != FORMAT_NETWORK:
        raise DocumentError(f"unsupported format {fmt!r} (expected {FORMAT_NETWORK!r})", path)
    kind = _require(doc, "kind", path)
    omega0 = float(_require(doc, "omega0", path))
    program = doc.get("program")

    try:
        if kind == "hypercube":
            top = build_hypercube(int(_require(doc, "d", path)))
        elif kind == "complete":
            top = build_complete(int(_require(doc, "N", path)))
        elif kind == "custom":
            top = build_custom(int(_require(doc, "N", path)),
                               _require(doc, "edges", path))
        else:
            raise DocumentError(f"unknown kind {kind!r}", path)

        if program is None:
            return top, coupling_from_topology(top, omega0), None
        ptype = _require(program, "type", path)
        if ptype == "subcube-split":
            if kind != "hypercube":
                raise DocumentError("subcube-split programs need a hypercube", path)
            split = SubcubeSplit(d=top.d, omega0=omega0,
                                 channel_bits=frozenset(program.get("channel_bits", ())),
                                 delta_omega=float(program.get("delta_omega", 0.0)))
            return top, program_subcube_split(split), split
        if ptype == "pairing":
            if kind != "complete":
                raise DocumentError("pairing programs need a complete graph", path)
            pairing = PairingProgram(num_nodes=top.num_nodes, omega0=omega0,
                                     matching=tuple(tuple(p) for p in _require(program, "matching", path)),
                                     delta_omega=float(program.get("delta_omega", 0.0)))
            return top, program_pairing(pairing), None
        if ptype == "frequencies":
            values = _require(program, "values", path)
            return top, coupling_from_topology(top, omega0, values), None
        raise DocumentError(f"unknown program type {ptype!r}", path)
    except DocumentError:
        raise
    except (ValueError, TypeError) as err:
        raise DocumentError(str(err), path) from err


def load_network(path: str):
    """Parse a network document file; YAML errors keep their line anchors."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as err:
            raise DocumentError(f"not valid YAML: {err}", path) from err
    return parse_network_doc(doc, path=path)


def network_doc_hypercube(d: int, omega0: float, channel_bits=(),
                          delta_omega: float = 0.0) -> dict:
    """Document builder for programmed hypercubes (round-trip helper)."""
    doc = {"format": FORMAT_NETWORK, "kind": "hypercube", "d": int(d),
           "omega0": float(omega0)}
    if channel_bits:
        doc["program"] = {"type": "subcube-split",
                          "channel_bits": sorted(int(b) for b in channel_bits),
                          "delta_omega": float(delta_omega)}
    return doc


def dump_network_doc(doc: dict) -> str:
    return yaml.safe_dump(doc, sort_keys=False)


def describe_split_frequencies(split: SubcubeSplit) -> list[float]:
    """Node frequencies of a split, for document round-trip tests."""
    return [float(f) for f in subcube_frequencies(split)]
