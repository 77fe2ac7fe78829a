"""Circuit I/O: a minimal OpenQASM 2.0 subset and a native JSON document.

QASM carries no layer boundaries, so imported gates are packed ASAP: each gate
goes into the layer right after the last layer touching any of its qubits.
The JSON document keeps layering exactly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pyparsing as pp
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .circuit import Circuit, Gate, GateKind, Layer
from .errors import CircuitFormatError

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1.0"

QASM_NAMES: Dict[GateKind, str] = {
    GateKind.H: "h",
    GateKind.X: "x",
    GateKind.Y: "y",
    GateKind.Z: "z",
    GateKind.S: "s",
    GateKind.T: "t",
    GateKind.SDG: "sdg",
    GateKind.TDG: "tdg",
    GateKind.CNOT: "cx",
}
_KINDS_BY_NAME = {name: kind for kind, name in QASM_NAMES.items()}


# =========================
# OpenQASM 2.0 grammar
# =========================


@dataclass(frozen=True)
class _Statement:
    kind: str
    line: int
    tokens: pp.ParseResults


def _statement(kind: str, expr: pp.ParserElement) -> pp.ParserElement:
    def tag(s: str, loc: int, toks: pp.ParseResults) -> _Statement:
        return _Statement(kind, pp.lineno(loc, s), toks)

    return expr.set_parse_action(tag)


def _build_grammar() -> pp.ParserElement:
    name = pp.Word(pp.alphas, pp.alphanums + "_")
    integer = pp.Word(pp.nums).set_parse_action(pp.token_map(int))
    semi = pp.Suppress(";")
    lbr, rbr = pp.Suppress("["), pp.Suppress("]")
    ref = pp.Group(name("reg") + pp.Optional(lbr + integer("index") + rbr))
    ref_list = pp.Group(ref + pp.ZeroOrMore(pp.Suppress(",") + ref))

    header = pp.Keyword("OPENQASM") + pp.Regex(r"\d+(\.\d+)?")("version") + semi
    include = pp.Keyword("include") + pp.QuotedString('"')("path") + semi
    qreg = pp.Keyword("qreg") + name("reg") + lbr + integer("size") + rbr + semi
    creg = pp.Keyword("creg") + name("reg") + lbr + integer("size") + rbr + semi
    measure = pp.Keyword("measure") + ref("source") + pp.Suppress("->") + ref("target") + semi
    barrier = pp.Keyword("barrier") + ref_list("args") + semi
    params = pp.original_text_for(pp.nested_expr("(", ")"))
    apply = name("name") + pp.Optional(params("params")) + ref_list("args") + semi

    statement = (
        _statement("header", header)
        | _statement("include", include)
        | _statement("qreg", qreg)
        | _statement("creg", creg)
        | _statement("measure", measure)
        | _statement("barrier", barrier)
        | _statement("apply", apply)
    )
    program = pp.ZeroOrMore(statement) + pp.StringEnd()
    program.ignore(pp.cpp_style_comment)
    return program


_GRAMMAR = _build_grammar()


def pack_asap(width: int, gates: Sequence[Gate]) -> Circuit:
    """Place each gate in the earliest layer after the last one touching its qubits."""
    frontier = [-1] * width
    layers: List[List[Gate]] = []
    for g in gates:
        k = max(frontier[q] for q in g.qubits) + 1
        if k == len(layers):
            layers.append([])
        layers[k].append(g)
        for q in g.qubits:
            frontier[q] = k
    return Circuit(width=width, layers=tuple(Layer(gates=tuple(layer)) for layer in layers))


def parse_qasm(text: str) -> Circuit:
    """Parse OpenQASM 2.0 text with a single qreg into an ASAP-layered circuit."""
    try:
        statements = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise CircuitFormatError(f"syntax error near {e.line.strip()!r}", line=e.lineno) from e

    reg: Optional[str] = None
    width = 0
    gates: List[Gate] = []
    for st in statements:
        toks = st.tokens
        if st.kind == "header":
            if not toks["version"].startswith("2"):
                raise CircuitFormatError(f"unsupported OpenQASM version {toks['version']}", line=st.line)
        elif st.kind == "include":
            continue
        elif st.kind == "qreg":
            if reg is not None:
                raise CircuitFormatError("multiple qregs are not supported", line=st.line)
            reg, width = toks["reg"], toks["size"]
            if width < 1:
                raise CircuitFormatError("qreg must have at least one qubit", line=st.line)
        elif st.kind in ("creg", "measure", "barrier"):
            logger.warning("line %d: ignoring '%s' statement", st.line, st.kind)
        else:
            gates.append(_gate_from_statement(st, reg, width))
    if reg is None:
        raise CircuitFormatError("missing qreg declaration")
    return pack_asap(width, gates)


def _gate_from_statement(st: _Statement, reg: Optional[str], width: int) -> Gate:
    toks = st.tokens
    gate_name = toks["name"]
    kind = _KINDS_BY_NAME.get(gate_name)
    if kind is None or "params" in toks:
        raise CircuitFormatError(f"unknown gate '{gate_name}'", line=st.line)
    if reg is None:
        raise CircuitFormatError(f"gate '{gate_name}' before qreg declaration", line=st.line)
    qubits = []
    for arg in toks["args"]:
        if arg["reg"] != reg:
            raise CircuitFormatError(f"unknown register '{arg['reg']}'", line=st.line)
        if "index" not in arg:
            raise CircuitFormatError("register broadcast is not supported", line=st.line)
        if arg["index"] >= width:
            raise CircuitFormatError(f"qubit {reg}[{arg['index']}] out of range (qreg size {width})", line=st.line)
        qubits.append(arg["index"])
    try:
        return Gate(kind=kind, qubits=tuple(qubits))
    except ValidationError as e:
        raise CircuitFormatError(e.errors()[0]["msg"], line=st.line) from e


def emit_qasm(circuit: Circuit, barriers: bool = False) -> str:
    """Render as OpenQASM 2.0, layer by layer.

    With `barriers`, a ``barrier q;`` separates layers so that hardware compilers
    do not cancel folded ``G G†`` pairs. The barriers are dropped on re-import.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.width}];"]
    for k, layer in enumerate(circuit.layers):
        if barriers and k > 0:
            lines.append("barrier q;")
        for g in layer.gates:
            args = ",".join(f"q[{q}]" for q in g.qubits)
            lines.append(f"{QASM_NAMES[g.kind]} {args};")
    return "\n".join(lines) + "\n"


# =========================
# JSON document
# =========================


class GateEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: GateKind
    qubits: List[int]


class CircuitDocument(BaseModel):
    """Serialized circuit: ``{"format-version": "1.0", "width": n, "layers": [[{kind, qubits}, ...], ...]}``."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    format_version: str = Field(default=FORMAT_VERSION, alias="format-version")
    width: int = Field(ge=1)
    layers: List[List[GateEntry]] = Field(default_factory=list)

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> "CircuitDocument":
        return cls(
            width=circuit.width,
            layers=[[GateEntry(kind=g.kind, qubits=list(g.qubits)) for g in layer.gates] for layer in circuit.layers],
        )

    def to_circuit(self) -> Circuit:
        if self.format_version.split(".")[0] != FORMAT_VERSION.split(".")[0]:
            raise CircuitFormatError(f"unsupported format version {self.format_version}", path="$.format-version")
        layers = []
        for i, entries in enumerate(self.layers):
            gates = []
            for j, entry in enumerate(entries):
                path = f"$.layers[{i}][{j}]"
                try:
                    g = Gate(kind=entry.kind, qubits=tuple(entry.qubits))
                except ValidationError as e:
                    raise CircuitFormatError(e.errors()[0]["msg"], path=path) from e
                if max(g.qubits) >= self.width:
                    raise CircuitFormatError(f"qubit {max(g.qubits)} out of range for width {self.width}", path=f"{path}.qubits")
                gates.append(g)
            try:
                layers.append(Layer(gates=tuple(gates)))
            except ValidationError as e:
                raise CircuitFormatError(e.errors()[0]["msg"], path=f"$.layers[{i}]") from e
        return Circuit(width=self.width, layers=tuple(layers))


def _json_path(loc: Sequence[int | str]) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in loc)


def parse_json(text: str | bytes) -> Circuit:
    """Parse a circuit document; schema violations report their JSON path."""
    try:
        doc = CircuitDocument.model_validate_json(text)
    except ValidationError as e:
        err = e.errors()[0]
        raise CircuitFormatError(err["msg"], path=_json_path(err["loc"])) from e
    return doc.to_circuit()


def emit_json(circuit: Circuit, indent: Optional[int] = 2) -> str:
    return CircuitDocument.from_circuit(circuit).model_dump_json(by_alias=True, indent=indent)


def load_circuit(path) -> Circuit:
    """Read a ``.qasm`` or ``.json`` file, chosen by suffix."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".qasm":
        return parse_qasm(text)
    if path.suffix.lower() == ".json":
        return parse_json(text)
    raise CircuitFormatError(f"unsupported circuit file extension '{path.suffix}' (expected .qasm or .json)")
