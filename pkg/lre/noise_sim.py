"""Density-matrix simulation under amplitude-damping noise.

Basis index convention: qubit 0 is the most significant bit, so ``|10>`` means
qubit 0 in state 1. Gates and Kraus operators are applied by tensor
contraction on the affected axes; no 2^n x 2^n operator is ever built.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .circuit import Circuit, Gate, GateKind
from .config import Settings, get_settings
from .errors import SimulationError

logger = logging.getLogger(__name__)

_SQRT_HALF = 1.0 / np.sqrt(2.0)

GATE_MATRICES: Dict[GateKind, np.ndarray] = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
    # control is the first (most significant) qubit of the pair
    GateKind.CNOT: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}


def damping_kraus(p: float) -> Tuple[np.ndarray, np.ndarray]:
    """Kraus pair ``E0 = [[1,0],[0,sqrt(1-p)]]``, ``E1 = [[0,sqrt(p)],[0,0]]``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"damping probability must be in [0, 1], got {p}")
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - p)]], dtype=complex)
    e1 = np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex)
    return e0, e1


class NoiseModel(BaseModel):
    """Amplitude damping after every gate: p1 for single-qubit gates, p2 on each CNOT qubit."""

    model_config = ConfigDict(frozen=True)

    p1: float = Field(default=0.04, ge=0.0, le=1.0)
    p2: float = Field(default=0.08, ge=0.0, le=1.0)
    enabled: bool = True

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls(p1=0.0, p2=0.0, enabled=False)

    @classmethod
    def from_settings(cls, settings: Optional[Settings] = None) -> "NoiseModel":
        s = settings or get_settings()
        return cls(p1=s.p1, p2=s.p2)

    def damping_for(self, g: Gate) -> float:
        if not self.enabled:
            return 0.0
        return self.p2 if g.arity == 2 else self.p1


class ZeroProjector(BaseModel):
    """``|0...0><0...0|``."""

    model_config = ConfigDict(frozen=True)

    def diagonal(self, n: int) -> np.ndarray:
        w = np.zeros(2**n)
        w[0] = 1.0
        return w


class DiagonalObservable(BaseModel):
    """Observable diagonal in the computational basis, one weight per basis state."""

    model_config = ConfigDict(frozen=True)

    weights: Tuple[float, ...]

    @classmethod
    def from_bitstrings(cls, values: Mapping[str, float], n: int) -> "DiagonalObservable":
        """Build from ``{"00": 1.0, "11": -1.0}``; unlisted states get weight 0."""
        w = [0.0] * (2**n)
        for bits, value in values.items():
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise ValueError(f"invalid {n}-qubit bitstring {bits!r}")
            w[int(bits, 2)] = float(value)
        return cls(weights=tuple(w))

    def diagonal(self, n: int) -> np.ndarray:
        if len(self.weights) != 2**n:
            raise ValueError(f"observable has {len(self.weights)} weights, circuit needs {2**n}")
        return np.asarray(self.weights, dtype=float)


Observable = Union[ZeroProjector, DiagonalObservable]


class ExpectationEstimate(BaseModel):
    """An estimated expectation value; ``shots == 0`` means `value` is exact."""

    model_config = ConfigDict(frozen=True)

    value: float
    shots: int = Field(ge=0)
    exact_value: float


@dataclass(frozen=True)
class DensityMatrix:
    n: int
    entries: np.ndarray

    @classmethod
    def zero_state(cls, n: int) -> "DensityMatrix":
        rho = np.zeros((2**n, 2**n), dtype=complex)
        rho[0, 0] = 1.0
        return cls(n=n, entries=rho)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, atol=tol, rtol=0.0))

    def probabilities(self) -> np.ndarray:
        """Computational-basis outcome probabilities (real diagonal)."""
        return np.real(np.diag(self.entries)).copy()

    def expectation(self, observable: Observable) -> float:
        return float(np.dot(observable.diagonal(self.n), self.probabilities()))


def _apply_operator(rho: DensityMatrix, op: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """``op rho op†`` with `op` acting on `qubits` (in op's own qubit order)."""
    n, k = rho.n, len(qubits)
    t = rho.entries.reshape((2,) * (2 * n))
    op_t = op.reshape((2,) * (2 * k))
    rows = list(qubits)
    cols = [n + q for q in qubits]
    t = np.tensordot(op_t, t, axes=(list(range(k, 2 * k)), rows))
    t = np.moveaxis(t, list(range(k)), rows)
    t = np.tensordot(t, op_t.conj(), axes=(cols, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * n - k, 2 * n)), cols)
    return t.reshape(2**n, 2**n)


def apply_gate(rho: DensityMatrix, g: Gate) -> DensityMatrix:
    if max(g.qubits) >= rho.n:
        raise SimulationError(f"{g} out of range for a {rho.n}-qubit state")
    return DensityMatrix(n=rho.n, entries=_apply_operator(rho, GATE_MATRICES[g.kind], g.qubits))


def apply_damping(rho: DensityMatrix, qubit: int, p: float) -> DensityMatrix:
    """Single-qubit amplitude damping ``E0 rho E0† + E1 rho E1†``."""
    if not 0 <= qubit < rho.n:
        raise SimulationError(f"qubit {qubit} out of range for a {rho.n}-qubit state")
    e0, e1 = damping_kraus(p)
    if p == 0.0:
        return rho
    entries = _apply_operator(rho, e0, (qubit,)) + _apply_operator(rho, e1, (qubit,))
    return DensityMatrix(n=rho.n, entries=entries)


def simulate_exact(circuit: Circuit, noise: NoiseModel, max_qubits: Optional[int] = None) -> DensityMatrix:
    """Final state from ``|0...0>``; each gate is followed by its damping channel.

    Idle qubits receive no noise.
    """
    limit = max_qubits if max_qubits is not None else get_settings().max_qubits
    if circuit.width > limit:
        raise SimulationError(f"circuit width {circuit.width} exceeds simulator limit {limit}")
    rho = DensityMatrix.zero_state(circuit.width)
    for layer in circuit.layers:
        for g in layer.gates:
            rho = apply_gate(rho, g)
            p = noise.damping_for(g)
            if p > 0.0:
                for q in g.qubits:
                    rho = apply_damping(rho, q, p)
    return rho


def sample_expectation(
    probabilities: np.ndarray,
    weights: np.ndarray,
    shots: int,
    rng: np.random.Generator,
) -> float:
    """Average of the observable over `shots` basis samples drawn from `probabilities`."""
    p = np.clip(np.asarray(probabilities, dtype=float), 0.0, None)
    p = p / p.sum()
    counts = rng.multinomial(shots, p)
    return float(np.dot(counts, weights) / shots)


def estimate_expectation(
    circuit: Circuit,
    noise: NoiseModel,
    observable: Optional[Observable] = None,
    shots: int = 0,
    seed: Union[int, np.random.Generator, None] = 0,
    max_qubits: Optional[int] = None,
) -> ExpectationEstimate:
    """Exact value for ``shots == 0``, otherwise a finite-shot estimate (exact value still recorded)."""
    if shots < 0:
        raise ValueError(f"shots must be >= 0, got {shots}")
    observable = observable or ZeroProjector()
    probs = simulate_exact(circuit, noise, max_qubits).probabilities()
    weights = observable.diagonal(circuit.width)
    exact = float(np.dot(weights, probs))
    if shots == 0:
        return ExpectationEstimate(value=exact, shots=0, exact_value=exact)
    value = sample_expectation(probs, weights, shots, np.random.default_rng(seed))
    return ExpectationEstimate(value=value, shots=shots, exact_value=exact)


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """``0.5 * ||rho - sigma||_1``."""
    diff = rho.entries - sigma.entries
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))
