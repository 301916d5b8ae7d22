import numpy as np
import pytest

from oscnet import program_subcube_split
from oscnet.serialize import (DocumentError, dump_network_doc, load_network,
                              network_doc_hypercube, parse_network_doc)


def test_hypercube_doc_roundtrip(tmp_path):
    doc = network_doc_hypercube(3, omega0=1.5, channel_bits=[2], delta_omega=6.0)
    path = tmp_path / "net.yaml"
    path.write_text(dump_network_doc(doc))
    top, coupling, split = load_network(str(path))
    assert top.kind == "hypercube" and top.num_nodes == 8
    assert split is not None and split.eta == pytest.approx(0.5)
    assert np.array_equal(coupling.matrix, program_subcube_split(split).matrix)


def test_complete_with_pairing(tmp_path):
    path = tmp_path / "net.yaml"
    path.write_text(
        "format: oscnet-network/1\n"
        "kind: complete\n"
        "N: 4\n"
        "omega0: 1.0\n"
        "program:\n"
        "  type: pairing\n"
        "  matching: [[0, 1], [2, 3]]\n"
        "  delta_omega: 5.0\n")
    _, coupling, split = load_network(str(path))
    assert split is None
    assert np.array_equal(np.diag(coupling.matrix), [0.0, 0.0, 5.0, 5.0])


def test_custom_frequencies():
    doc = {"format": "oscnet-network/1", "kind": "custom", "N": 3,
           "edges": [[0, 1], [1, 2]], "omega0": 2.0,
           "program": {"type": "frequencies", "values": [0.0, 1.0, -1.0]}}
    _, coupling, _ = parse_network_doc(doc)
    assert np.array_equal(np.diag(coupling.matrix), [0.0, 1.0, -1.0])
    assert coupling.matrix[0, 2] == 0.0


def test_version_check():
    with pytest.raises(DocumentError, match="unsupported format"):
        parse_network_doc({"format": "oscnet-network/9", "kind": "complete",
                           "N": 2, "omega0": 1.0})


def test_missing_key_named():
    with pytest.raises(DocumentError, match="omega0"):
        parse_network_doc({"format": "oscnet-network/1", "kind": "complete", "N": 2})


def test_program_kind_mismatch():
    doc = {"format": "oscnet-network/1", "kind": "complete", "N": 4, "omega0": 1.0,
           "program": {"type": "subcube-split", "channel_bits": [0], "delta_omega": 1.0}}
    with pytest.raises(DocumentError, match="hypercube"):
        parse_network_doc(doc)


def test_yaml_error_carries_location(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("kind: [unclosed\n")
    with pytest.raises(DocumentError, match="line"):
        load_network(str(path))
