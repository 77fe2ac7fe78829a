"""Layered circuit representation and unitary folding.

Layers are stored in application order: ``layers[0]`` acts on the state first.
"""
from __future__ import annotations

from enum import Enum
from numbers import Integral
from typing import Iterator, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import InvalidScaleFactor


class GateKind(str, Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    S = "S"
    T = "T"
    SDG = "Sdg"
    TDG = "Tdg"
    CNOT = "CNOT"


_ADJOINTS = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


class FoldMode(str, Enum):
    GLOBAL = "global"
    LOCAL = "local"


class Gate(BaseModel):
    """A single gate; for CNOT the control comes first in `qubits`."""

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_qubits(self) -> "Gate":
        if len(self.qubits) != self.arity:
            raise ValueError(f"{self.kind.value} acts on {self.arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.value} qubit indices must be distinct")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        return self

    @property
    def arity(self) -> int:
        return 2 if self.kind is GateKind.CNOT else 1

    def adjoint(self) -> "Gate":
        kind = _ADJOINTS.get(self.kind, self.kind)
        if kind is self.kind:
            return self
        return self.model_copy(update={"kind": kind})

    def __str__(self) -> str:
        return f"{self.kind.value} " + " ".join(f"q{q}" for q in self.qubits)


def gate(kind: str | GateKind, *qubits: int) -> Gate:
    """Shorthand constructor: ``gate("CNOT", 0, 1)``."""
    return Gate(kind=GateKind(kind), qubits=qubits)


class Layer(BaseModel):
    """Gates acting concurrently; no qubit is touched twice."""

    model_config = ConfigDict(frozen=True)

    gates: Tuple[Gate, ...] = ()

    @field_validator("gates")
    @classmethod
    def _disjoint(cls, gates: Tuple[Gate, ...]) -> Tuple[Gate, ...]:
        seen: set[int] = set()
        for g in gates:
            clash = seen.intersection(g.qubits)
            if clash:
                raise ValueError(f"qubit {min(clash)} used by two gates of the same layer")
            seen.update(g.qubits)
        return gates

    @property
    def qubits(self) -> frozenset[int]:
        return frozenset(q for g in self.gates for q in g.qubits)

    def adjoint(self) -> "Layer":
        # Gates of a layer act on disjoint qubits, so their order does not matter.
        return Layer(gates=tuple(g.adjoint() for g in self.gates))


class Circuit(BaseModel):
    """An n-qubit circuit as an ordered tuple of layers."""

    model_config = ConfigDict(frozen=True)

    width: int = Field(ge=1)
    layers: Tuple[Layer, ...] = ()

    @field_validator("layers", mode="before")
    @classmethod
    def _wrap_gate_lists(cls, v):
        if isinstance(v, (list, tuple)):
            return [{"gates": item} if isinstance(item, (list, tuple)) else item for item in v]
        return v

    @model_validator(mode="after")
    def _within_width(self) -> "Circuit":
        for k, layer in enumerate(self.layers):
            for g in layer.gates:
                if max(g.qubits) >= self.width:
                    raise ValueError(f"layer {k}: {g} exceeds circuit width {self.width}")
        return self

    @property
    def depth(self) -> int:
        return len(self.layers)

    def gates(self) -> Iterator[Gate]:
        for layer in self.layers:
            yield from layer.gates

    def gate_count(self, kind: GateKind | None = None) -> int:
        return sum(1 for g in self.gates() if kind is None or g.kind is kind)


class Chunking(BaseModel):
    """Contiguous half-open layer ranges ``[start, stop)`` covering a circuit."""

    model_config = ConfigDict(frozen=True)

    depth: int = Field(ge=0)
    boundaries: Tuple[Tuple[int, int], ...]

    @model_validator(mode="after")
    def _covers_depth(self) -> "Chunking":
        cursor = 0
        for start, stop in self.boundaries:
            if start != cursor or stop <= start:
                raise ValueError(f"chunk [{start}, {stop}) is empty or not contiguous")
            cursor = stop
        if cursor != self.depth:
            raise ValueError(f"chunks cover {cursor} layers, circuit has {self.depth}")
        return self

    @classmethod
    def per_layer(cls, depth: int) -> "Chunking":
        return cls(depth=depth, boundaries=tuple((k, k + 1) for k in range(depth)))

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(stop - start for start, stop in self.boundaries)

    def __len__(self) -> int:
        return len(self.boundaries)


def check_scale_factor(lam: object) -> int:
    """Return `lam` as int if it is an odd integer >= 1, else raise InvalidScaleFactor."""
    if isinstance(lam, bool) or not isinstance(lam, Integral):
        raise InvalidScaleFactor(f"scale factor must be an odd integer, got {lam!r}")
    lam = int(lam)
    if lam < 1 or lam % 2 == 0:
        raise InvalidScaleFactor(f"scale factor must be an odd integer >= 1, got {lam}")
    return lam


def _inverse_layers(layers: Sequence[Layer]) -> List[Layer]:
    return [layer.adjoint() for layer in reversed(layers)]


def fold_chunk(chunk: Sequence[Layer], lam: int, mode: FoldMode = FoldMode.LOCAL) -> Tuple[Layer, ...]:
    """Fold a chunk so its depth (and gate noise) is scaled by `lam`.

    Global: ``C, C†, C, ..., C`` (2m+1 blocks, m = (lam-1)/2).
    Local: every layer ``G`` becomes ``G, G†, G, ..., G`` in place.
    """
    lam = check_scale_factor(lam)
    if not chunk:
        raise ValueError("cannot fold an empty chunk")
    chunk = list(chunk)
    m = (lam - 1) // 2
    if m == 0:
        return tuple(chunk)
    if FoldMode(mode) is FoldMode.GLOBAL:
        inverse_chunk = _inverse_layers(chunk)
        return tuple(chunk + (inverse_chunk + chunk) * m)
    out: List[Layer] = []
    for layer in chunk:
        out.extend([layer] + [layer.adjoint(), layer] * m)
    return tuple(out)


def fold_circuit(
    circuit: Circuit,
    chunking: Chunking,
    lambdas: Sequence[int],
    mode: FoldMode = FoldMode.LOCAL,
) -> Circuit:
    """Fold chunk ``k`` of `circuit` with scale factor ``lambdas[k]``."""
    if chunking.depth != circuit.depth:
        raise ValueError(f"chunking covers {chunking.depth} layers, circuit has {circuit.depth}")
    if len(lambdas) != len(chunking):
        raise ValueError(f"expected {len(chunking)} scale factors, got {len(lambdas)}")
    layers: List[Layer] = []
    for (start, stop), lam in zip(chunking.boundaries, lambdas):
        layers.extend(fold_chunk(circuit.layers[start:stop], lam, mode))
    return Circuit(width=circuit.width, layers=tuple(layers))


def chunk_circuit(circuit: Circuit, l: int) -> Chunking:
    """Split into `l` contiguous chunks; the first ``depth % l`` chunks get one extra layer."""
    depth = circuit.depth
    if not 1 <= l <= depth:
        raise ValueError(f"chunk count must be in [1, {depth}], got {l}")
    base, extra = divmod(depth, l)
    boundaries = []
    start = 0
    for k in range(l):
        stop = start + base + (1 if k < extra else 0)
        boundaries.append((start, stop))
        start = stop
    return Chunking(depth=depth, boundaries=tuple(boundaries))


def inverse(circuit: Circuit) -> Circuit:
    """Reversed layers with every gate adjointed."""
    return Circuit(width=circuit.width, layers=tuple(_inverse_layers(circuit.layers)))
