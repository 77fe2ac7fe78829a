import os
from typing import List

import numpy as np
import pytest

# Pin a predictable environment before importing the package
os.environ.setdefault("LRE_SEED", "0")
os.environ.setdefault("LRE_THREADS", "1")
os.environ.setdefault("LRE_P1", "0.04")
os.environ.setdefault("LRE_P2", "0.08")
os.environ.setdefault("LRE_MAX_QUBITS", "10")
os.environ.setdefault("LRE_CACHE_TYPE", "SimpleCache")
os.environ.setdefault("LRE_LOG_LEVEL", "WARNING")

from lre.circuit import Circuit, Gate, GateKind, Layer  # noqa: E402
from lre.noise_sim import NoiseModel  # noqa: E402

_ONE_QUBIT = [GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.T, GateKind.SDG, GateKind.TDG]


def make_random_circuit(rng: np.random.Generator, n: int, depth: int) -> Circuit:
    """Random layered circuit over the full gate set; every layer is non-empty."""
    layers: List[Layer] = []
    for _ in range(depth):
        order = [int(q) for q in rng.permutation(n)]
        gates: List[Gate] = []
        while order:
            q = order.pop()
            if order and rng.random() < 0.4:
                other = order.pop()
                gates.append(Gate(kind=GateKind.CNOT, qubits=(q, other)))
            elif rng.random() < 0.8:
                gates.append(Gate(kind=_ONE_QUBIT[int(rng.integers(len(_ONE_QUBIT)))], qubits=(q,)))
        if not gates:
            gates.append(Gate(kind=GateKind.H, qubits=(int(rng.integers(n)),)))
        layers.append(Layer(gates=tuple(gates)))
    return Circuit(width=n, layers=tuple(layers))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def noisy() -> NoiseModel:
    return NoiseModel(p1=0.04, p2=0.08)


@pytest.fixture
def noiseless() -> NoiseModel:
    return NoiseModel.noiseless()
