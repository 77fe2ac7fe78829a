"""Benchmark circuits and the experiment harness.

Both circuit families are mirrors (a circuit followed by its inverse), so the
ideal expectation of ``|0...0><0...0|`` is exactly 1 and the absolute error of
an estimate is ``|estimate - 1|``.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .backends import SimulatorBackend
from .circuit import Circuit, Gate, GateKind, Layer, gate, inverse
from .config import Settings, get_settings
from .noise_sim import NoiseModel
from .protocol import MitigationConfig, MitigationRunner, Strategy
from .utils import derive_seed

logger = logging.getLogger(__name__)

IDEAL_VALUE = 1.0

CSV_COLUMNS = [
    "family", "sweep_var", "sweep_value", "strategy", "d", "l", "delta", "s_tot",
    "trials", "mean", "std", "mean_abs_error", "improvement_pct",
]

_RANDOM_SINGLE_QUBIT = (GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.T)


# =========================
# Circuit families
# =========================


def ghz_mirror(n: int) -> Circuit:
    """GHZ preparation (H, then a CNOT ladder) followed by its inverse; depth 2n."""
    if n < 1:
        raise ValueError("ghz_mirror needs at least one qubit")
    half = Circuit(width=n, layers=[[gate("H", 0)]] + [[gate("CNOT", k, k + 1)] for k in range(n - 1)])
    return Circuit(width=n, layers=half.layers + inverse(half).layers)


def random_mirror(n: int, half_depth: int, p_cnot: float = 0.9, seed: int = 0) -> Circuit:
    """``C_rand`` with exactly `half_depth` layers followed by its inverse.

    Each layer visits the qubits in random order; an unoccupied qubit is paired
    by a CNOT (random direction) with another random unoccupied qubit with
    probability `p_cnot`, otherwise it gets a random gate from {H, X, Y, Z, S, T}.
    """
    if n < 1 or half_depth < 1:
        raise ValueError("random_mirror needs n >= 1 and half_depth >= 1")
    if not 0.0 <= p_cnot <= 1.0:
        raise ValueError(f"p_cnot must be in [0, 1], got {p_cnot}")
    rng = np.random.default_rng(seed)
    layers: List[Layer] = []
    for _ in range(half_depth):
        free = set(range(n))
        gates: List[Gate] = []
        for q in (int(x) for x in rng.permutation(n)):
            if q not in free:
                continue
            free.discard(q)
            partners = sorted(free)
            if partners and rng.random() < p_cnot:
                other = int(rng.choice(partners))
                free.discard(other)
                pair = (q, other) if rng.random() < 0.5 else (other, q)
                gates.append(Gate(kind=GateKind.CNOT, qubits=pair))
            else:
                kind = _RANDOM_SINGLE_QUBIT[int(rng.integers(len(_RANDOM_SINGLE_QUBIT)))]
                gates.append(Gate(kind=kind, qubits=(q,)))
        layers.append(Layer(gates=tuple(gates)))
    half = Circuit(width=n, layers=tuple(layers))
    return Circuit(width=n, layers=half.layers + inverse(half).layers)


# =========================
# Experiment description
# =========================


class Family(str, Enum):
    GHZ_MIRROR = "ghz"
    RANDOM_MIRROR = "random"


class SweepVar(str, Enum):
    QUBITS = "qubits"
    DEGREE = "degree"
    SHOTS = "shots"
    DELTA = "delta"
    CHUNKS = "chunks"


class ExperimentSpec(BaseModel):
    """One sweep: for every value, `trials` repetitions of unmitigated, RE and LRE."""

    model_config = ConfigDict(frozen=True)

    family: Family = Family.GHZ_MIRROR
    sweep: SweepVar
    values: Tuple[int, ...] = Field(min_length=1)
    trials: int = Field(default=10, ge=1)
    base: MitigationConfig = Field(default_factory=lambda: MitigationConfig(s_tot=1_000_000))
    qubits: int = Field(default=4, ge=1)
    half_depth: int = Field(default=2, ge=1)
    p_cnot: float = Field(default=0.9, ge=0.0, le=1.0)
    noise: NoiseModel = Field(default_factory=NoiseModel)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _valid_values(self) -> "ExperimentSpec":
        for v in self.values:
            if self.sweep is SweepVar.QUBITS and v < 1:
                raise ValueError(f"qubit count must be >= 1, got {v}")
            if self.sweep in (SweepVar.DEGREE, SweepVar.CHUNKS) and v < 1:
                raise ValueError(f"{self.sweep.value} must be >= 1, got {v}")
            if self.sweep is SweepVar.SHOTS and v < 0:
                raise ValueError(f"shots must be >= 0, got {v}")
            if self.sweep is SweepVar.DELTA and (v < 2 or v % 2):
                raise ValueError(f"delta must be even and >= 2, got {v}")
            chunks = v if self.sweep is SweepVar.CHUNKS else self.base.chunks
            if chunks is not None and chunks > self.depth_for(v):
                raise ValueError(f"{chunks} chunks exceed the circuit depth {self.depth_for(v)}")
        return self

    def depth_for(self, value: int) -> int:
        """Depth of the mirror circuit at this sweep value."""
        if self.family is Family.GHZ_MIRROR:
            return 2 * (value if self.sweep is SweepVar.QUBITS else self.qubits)
        return 2 * self.half_depth

    def circuit_for(self, value: int, circuit_seed: int) -> Circuit:
        n = value if self.sweep is SweepVar.QUBITS else self.qubits
        if self.family is Family.GHZ_MIRROR:
            return ghz_mirror(n)
        return random_mirror(n, self.half_depth, self.p_cnot, circuit_seed)

    def config_for(self, value: int) -> MitigationConfig:
        overrides = {
            SweepVar.DEGREE: {"d": value},
            SweepVar.SHOTS: {"s_tot": value},
            SweepVar.DELTA: {"delta": value},
            SweepVar.CHUNKS: {"chunks": value},
        }.get(self.sweep, {})
        return MitigationConfig(**{**self.base.model_dump(), **overrides, "strategy": Strategy.LRE})


PRESETS: Dict[str, dict] = {
    "ghz-qubits": {"family": "ghz", "sweep": "qubits", "values": (2, 3, 4)},
    "ghz-degree": {"family": "ghz", "sweep": "degree", "values": (1, 2, 3), "qubits": 4},
    "ghz-shots": {"family": "ghz", "sweep": "shots", "values": (10**4, 10**5, 10**6), "qubits": 6},
    "ghz-delta": {"family": "ghz", "sweep": "delta", "values": (2, 4, 6, 8), "qubits": 8, "s_tot": 10**5},
    "ghz-chunks": {"family": "ghz", "sweep": "chunks", "values": (1, 2, 4, 8, 16), "qubits": 8},
    "random-qubits": {"family": "random", "sweep": "qubits", "values": (3, 4, 5), "half_depth": 2},
}


# =========================
# Results
# =========================


class TrialRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    sweep_value: int
    strategy: Strategy
    trial: int
    value: float
    exact_value: float


class StatisticsRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Family
    sweep_var: SweepVar
    sweep_value: int
    strategy: Strategy
    d: Optional[int]
    l: Optional[int]
    delta: Optional[int]
    s_tot: int
    trials: int
    mean: float
    std: float
    mean_abs_error: float
    improvement_pct: Optional[float] = None


class TrialStatistics(BaseModel):
    """Per (sweep value, strategy) statistics plus the raw per-trial values."""

    model_config = ConfigDict(frozen=True)

    rows: Tuple[StatisticsRow, ...]
    records: Tuple[TrialRecord, ...]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump(mode="json") for r in self.rows], columns=CSV_COLUMNS)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False, float_format="%.10g", lineterminator="\n")

    def row(self, sweep_value: int, strategy: Strategy) -> StatisticsRow:
        for r in self.rows:
            if r.sweep_value == sweep_value and r.strategy is strategy:
                return r
        raise KeyError((sweep_value, strategy))


def improvement_table(stats: TrialStatistics) -> pd.DataFrame:
    """Mean absolute errors per sweep value side by side, with LRE's improvement over RE."""
    df = stats.to_frame()
    table = df.pivot(index="sweep_value", columns="strategy", values="mean_abs_error")
    table = table.rename(columns={s.value: f"{s.value}_error" for s in Strategy})
    lre = df[df["strategy"] == Strategy.LRE.value].set_index("sweep_value")["improvement_pct"]
    table["improvement_pct"] = lre
    return table.reset_index()[["sweep_value", "unmitigated_error", "re_error", "lre_error", "improvement_pct"]]


# =========================
# Harness
# =========================


def _run_trial(spec: ExperimentSpec, runner: MitigationRunner, vi: int, value: int, trial: int) -> List[TrialRecord]:
    circuit = spec.circuit_for(value, derive_seed(spec.seed, vi, trial, 1))
    config = spec.config_for(value)
    seeds = {s: derive_seed(spec.seed, vi, trial, 2, k) for k, s in enumerate(Strategy)}
    unmitigated = runner.run_unmitigated(circuit, config.s_tot, seed=seeds[Strategy.UNMITIGATED])
    re = runner.run_re(circuit, config.d, config.delta, config.s_tot, seed=seeds[Strategy.RE], mode=config.mode)
    lre = runner.run_lre(circuit, config, seed=seeds[Strategy.LRE])
    return [
        TrialRecord(sweep_value=value, strategy=Strategy.UNMITIGATED, trial=trial,
                    value=unmitigated.value, exact_value=unmitigated.exact_value),
        TrialRecord(sweep_value=value, strategy=Strategy.RE, trial=trial, value=re.value, exact_value=re.exact_value),
        TrialRecord(sweep_value=value, strategy=Strategy.LRE, trial=trial, value=lre.value, exact_value=lre.exact_value),
    ]


def _summarize(spec: ExperimentSpec, records: List[TrialRecord]) -> List[StatisticsRow]:
    rows: List[StatisticsRow] = []
    for value in spec.values:
        config = spec.config_for(value)
        circuit_depth = spec.circuit_for(value, 0).depth
        errors: Dict[Strategy, float] = {}
        for strategy in (Strategy.UNMITIGATED, Strategy.RE, Strategy.LRE):
            vals = np.array([r.value for r in records if r.sweep_value == value and r.strategy is strategy])
            errors[strategy] = float(np.mean(np.abs(vals - IDEAL_VALUE)))
            if strategy is Strategy.UNMITIGATED:
                d = l = delta = None
            else:
                d, delta = config.d, config.delta
                l = 1 if strategy is Strategy.RE else config.resolve_chunks(circuit_depth)
            improvement = None
            if strategy is Strategy.LRE and errors[Strategy.LRE] > 0:
                improvement = (errors[Strategy.RE] - errors[Strategy.LRE]) / errors[Strategy.LRE] * 100.0
            rows.append(StatisticsRow(
                family=spec.family,
                sweep_var=spec.sweep,
                sweep_value=value,
                strategy=strategy,
                d=d,
                l=l,
                delta=delta,
                s_tot=config.s_tot,
                trials=spec.trials,
                mean=float(np.mean(vals)),
                std=float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0,
                mean_abs_error=errors[strategy],
                improvement_pct=improvement,
            ))
    return rows


def run_experiment(
    spec: ExperimentSpec,
    settings: Optional[Settings] = None,
    threads: Optional[int] = None,
) -> TrialStatistics:
    """Run every (sweep value, trial) job and aggregate; output is independent of thread count."""
    settings = settings or get_settings()
    threads = threads or settings.threads
    backend = SimulatorBackend(noise=spec.noise, settings=settings)
    runner = MitigationRunner(backend=backend, settings=settings, threads=1)
    jobs = [(vi, value, t) for vi, value in enumerate(spec.values) for t in range(spec.trials)]

    def job(args: Tuple[int, int, int]) -> List[TrialRecord]:
        vi, value, t = args
        if t == 0:
            logger.info("%s sweep %s=%d (%d trials)", spec.family.value, spec.sweep.value, value, spec.trials)
        return _run_trial(spec, runner, vi, value, t)

    if threads == 1:
        results = [job(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, jobs))
    records = [r for batch in results for r in batch]
    return TrialStatistics(rows=tuple(_summarize(spec, records)), records=tuple(records))
