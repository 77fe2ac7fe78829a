import json
import logging

import pytest
from conftest import make_random_circuit

from lre.bench import ghz_mirror
from lre.circuit import Circuit, gate
from lre.errors import CircuitFormatError
from lre.qasm_io import emit_json, emit_qasm, load_circuit, pack_asap, parse_json, parse_qasm

GHZ3 = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
h q[0];
cx q[0],q[1];
cx q[1],q[2];
"""


def test_parse_qasm_packs_asap():
    c = parse_qasm(GHZ3)
    assert c.width == 3
    assert c.depth == 3
    assert c.layers[1].gates == (gate("CNOT", 0, 1),)

    parallel = parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0];\nx q[1];\n// comment\nt q[1];\n")
    assert parallel.depth == 2
    assert parallel.layers[0].gates == (gate("H", 0), gate("X", 1))


def test_ignored_statements_warn(caplog):
    text = GHZ3 + "creg c[3];\nbarrier q;\nmeasure q[0] -> c[0];\n"
    with caplog.at_level(logging.WARNING, logger="lre.qasm_io"):
        c = parse_qasm(text)
    assert c.depth == 3
    assert "line 7" in caplog.text
    assert "measure" in caplog.text


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("OPENQASM 2.0;\nqreg q[2];\nrx(0.5) q[0];\n", 3, "unknown gate 'rx'"),
        ("OPENQASM 2.0;\nqreg q[2];\nccx q[0],q[1],q[0];\n", 3, "unknown gate 'ccx'"),
        ("OPENQASM 2.0;\nqreg q[2];\nh q[5];\n", 3, "out of range"),
        ("OPENQASM 2.0;\nqreg q[2];\nh r[0];\n", 3, "unknown register"),
        ("OPENQASM 2.0;\nqreg q[2];\nh q;\n", 3, "broadcast"),
        ("OPENQASM 2.0;\nqreg q[2];\nqreg r[2];\n", 3, "multiple qregs"),
        ("OPENQASM 2.0;\nh q[0];\nqreg q[2];\n", 2, "before qreg"),
        ("OPENQASM 2.0;\nqreg q[2];\nh q[0]\n", 3, "syntax error"),
    ],
)
def test_qasm_errors_carry_line(text, line, fragment):
    with pytest.raises(CircuitFormatError) as err:
        parse_qasm(text)
    assert err.value.line == line
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"line {line}: ")


def test_missing_qreg():
    with pytest.raises(CircuitFormatError):
        parse_qasm("OPENQASM 2.0;\n")


def test_emit_qasm_layout_and_barriers():
    c = ghz_mirror(2)
    text = emit_qasm(c)
    assert text.splitlines()[:3] == ["OPENQASM 2.0;", 'include "qelib1.inc";', "qreg q[2];"]
    assert "cx q[0],q[1];" in text
    with_barriers = emit_qasm(c, barriers=True)
    assert with_barriers.count("barrier q;") == c.depth - 1
    assert parse_qasm(with_barriers) == parse_qasm(text)


def test_qasm_round_trip_of_asap_circuit():
    c = ghz_mirror(4)
    assert parse_qasm(emit_qasm(c)) == c


def test_round_trips_over_random_circuits(rng):
    for _ in range(200):
        c = make_random_circuit(rng, int(rng.integers(1, 5)), int(rng.integers(1, 7)))
        assert parse_json(emit_json(c)) == c
        canonical = parse_qasm(emit_qasm(c))
        assert canonical.gate_count() == c.gate_count()
        assert parse_qasm(emit_qasm(canonical)) == canonical
        assert canonical == pack_asap(c.width, list(c.gates()))


def test_json_document_shape():
    doc = json.loads(emit_json(ghz_mirror(1)))
    assert doc == {
        "format-version": "1.0",
        "width": 1,
        "layers": [[{"kind": "H", "qubits": [0]}], [{"kind": "H", "qubits": [0]}]],
    }


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"format-version": "1.0", "layers": []}, "$.width"),
        ({"width": 2, "layers": [[{"kind": "RX", "qubits": [0]}]]}, "$.layers[0][0].kind"),
        ({"width": 2, "layers": [[{"kind": "H", "qubits": [5]}]]}, "$.layers[0][0].qubits"),
        ({"width": 2, "layers": [[{"kind": "CNOT", "qubits": [0]}]]}, "$.layers[0][0]"),
        ({"width": 2, "layers": [[{"kind": "H", "qubits": [0]}, {"kind": "X", "qubits": [0]}]]}, "$.layers[0]"),
        ({"format-version": "2.0", "width": 1, "layers": []}, "$.format-version"),
    ],
)
def test_json_errors_carry_path(doc, path):
    with pytest.raises(CircuitFormatError) as err:
        parse_json(json.dumps(doc))
    assert err.value.path == path


def test_load_circuit_by_suffix(tmp_path):
    c = ghz_mirror(3)
    (tmp_path / "c.qasm").write_text(emit_qasm(c))
    (tmp_path / "c.json").write_text(emit_json(c))
    assert load_circuit(tmp_path / "c.qasm") == c
    assert load_circuit(tmp_path / "c.json") == c
    (tmp_path / "c.txt").write_text("")
    with pytest.raises(CircuitFormatError):
        load_circuit(tmp_path / "c.txt")


def test_empty_circuit_json():
    assert parse_json('{"width": 1, "layers": []}') == Circuit(width=1)
