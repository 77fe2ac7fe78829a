"""The LRE protocol and its baselines.

1. hyper-parameters (d, l, delta) give M = C(d+l, d);
2. build the scale-factor vectors;
3. compute the eta coefficients (before any simulation, so singular sets fail fast);
4. split the circuit into l chunks and fold it once per vector;
5. split the shot budget;
6. estimate the M expectation values;
7. combine them linearly.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .backends import CircuitTask, ExpectationBackend, SimulatorBackend
from .budget import BudgetReport, overhead
from .circuit import Circuit, FoldMode, chunk_circuit, fold_circuit
from .config import Settings, get_settings
from .interpolation import EtaCoefficients, ScaleFactorConfig, default_scale_factors, eta_coefficients, lre_combine
from .noise_sim import ExpectationEstimate, NoiseModel, Observable, ZeroProjector
from .utils import derive_seed

logger = logging.getLogger(__name__)


class Strategy(str, Enum):
    LRE = "lre"
    RE = "re"
    UNMITIGATED = "unmitigated"


class MitigationConfig(BaseModel):
    """Protocol hyper-parameters. ``s_tot == 0`` requests exact expectation values."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(default=2, ge=1)
    chunks: Optional[int] = Field(default=None, ge=1)
    delta: int = Field(default=2, ge=2)
    s_tot: int = Field(default=0, ge=0)
    mode: FoldMode = FoldMode.LOCAL
    strategy: Strategy = Strategy.LRE

    @model_validator(mode="before")
    @classmethod
    def _re_is_single_chunk(cls, data):
        if isinstance(data, dict) and Strategy(data.get("strategy", Strategy.LRE)) is Strategy.RE:
            data = {**data, "chunks": 1}
        return data

    @field_validator("delta")
    @classmethod
    def _even_delta(cls, v: int) -> int:
        if v % 2:
            raise ValueError("delta must be even")
        return v

    def resolve_chunks(self, depth: int) -> int:
        """Chunk count for a circuit of this depth (None means one chunk per layer)."""
        l = depth if self.chunks is None else self.chunks
        if not 1 <= l <= depth:
            raise ValueError(f"chunk count must be in [1, {depth}], got {l}")
        return l


class RawEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    scale_factors: Tuple[int, ...]
    shots: int
    estimate: float
    exact_estimate: float


class MitigatedResult(BaseModel):
    """Mitigated value with everything that produced it.

    `exact_value` is the same linear combination applied to the shot-free
    expectation values, i.e. the bias-only part of `value`.
    """

    model_config = ConfigDict(frozen=True)

    strategy: Strategy
    chunks: int
    value: float
    exact_value: float
    eta: EtaCoefficients
    scale_factors: ScaleFactorConfig
    raw: Tuple[RawEstimate, ...]
    budget: BudgetReport


class MitigationRunner:
    """Runs the protocol against an expectation backend (the embedded simulator by default)."""

    def __init__(
        self,
        backend: Optional[ExpectationBackend] = None,
        settings: Optional[Settings] = None,
        noise: Optional[NoiseModel] = None,
        threads: Optional[int] = None,
    ) -> None:
        self.settings = settings or get_settings()
        self.backend = backend or SimulatorBackend(noise=noise, settings=self.settings)
        self.threads = threads or self.settings.threads

    # ---- Evaluation ----
    def _evaluate(self, tasks: Sequence[CircuitTask]) -> List[ExpectationEstimate]:
        # map() yields in submission order, whatever the completion order.
        if self.threads == 1 or len(tasks) == 1:
            return [self.backend.estimate(t) for t in tasks]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(self.backend.estimate, tasks))

    # ---- Strategies ----
    def run_lre(
        self,
        circuit: Circuit,
        config: MitigationConfig,
        observable: Optional[Observable] = None,
        seed: Optional[int] = None,
    ) -> MitigatedResult:
        if config.strategy is Strategy.UNMITIGATED:
            raise ValueError("use run_unmitigated for the unmitigated strategy")
        seed = self.settings.seed if seed is None else seed
        observable = observable or ZeroProjector()
        l = config.resolve_chunks(circuit.depth)

        scale_factors = default_scale_factors(l, config.d, config.delta)
        eta = eta_coefficients(scale_factors)
        budget = overhead(eta, config.s_tot)
        logger.info(
            "%s: n=%d depth=%d l=%d d=%d delta=%d M=%d gamma=%.4g s_tot=%d",
            config.strategy.value, circuit.width, circuit.depth, l, config.d, config.delta,
            scale_factors.size, budget.gamma, config.s_tot,
        )

        chunking = chunk_circuit(circuit, l)
        tasks = [
            CircuitTask(
                index=i,
                circuit=fold_circuit(circuit, chunking, vec, config.mode),
                scale_factors=vec,
                shots=budget.allocations[i],
                seed=derive_seed(seed, i),
                observable=observable,
            )
            for i, vec in enumerate(scale_factors.vectors)
        ]
        estimates = self._evaluate(tasks)

        raw = tuple(
            RawEstimate(scale_factors=t.scale_factors, shots=t.shots, estimate=e.value, exact_estimate=e.exact_value)
            for t, e in zip(tasks, estimates)
        )
        return MitigatedResult(
            strategy=config.strategy,
            chunks=l,
            value=lre_combine(eta, [r.estimate for r in raw]),
            exact_value=lre_combine(eta, [r.exact_estimate for r in raw]),
            eta=eta,
            scale_factors=scale_factors,
            raw=raw,
            budget=budget,
        )

    def run_re(
        self,
        circuit: Circuit,
        d: int = 2,
        delta: int = 2,
        s_tot: int = 0,
        observable: Optional[Observable] = None,
        seed: Optional[int] = None,
        mode: FoldMode = FoldMode.LOCAL,
    ) -> MitigatedResult:
        """Single-variable Richardson extrapolation: LRE with one chunk."""
        config = MitigationConfig(d=d, delta=delta, s_tot=s_tot, mode=mode, strategy=Strategy.RE)
        return self.run_lre(circuit, config, observable, seed)

    def run_unmitigated(
        self,
        circuit: Circuit,
        s_tot: int = 0,
        observable: Optional[Observable] = None,
        seed: Optional[int] = None,
    ) -> ExpectationEstimate:
        """The unfolded circuit with the whole budget."""
        seed = self.settings.seed if seed is None else seed
        task = CircuitTask(
            index=0,
            circuit=circuit,
            scale_factors=(1,),
            shots=s_tot,
            seed=derive_seed(seed, 0),
            observable=observable or ZeroProjector(),
        )
        return self.backend.estimate(task)

    def run(
        self,
        circuit: Circuit,
        config: MitigationConfig,
        observable: Optional[Observable] = None,
        seed: Optional[int] = None,
    ) -> Union[MitigatedResult, ExpectationEstimate]:
        """Dispatch on ``config.strategy``."""
        if config.strategy is Strategy.UNMITIGATED:
            return self.run_unmitigated(circuit, config.s_tot, observable, seed)
        return self.run_lre(circuit, config, observable, seed)


# Module-level facade over a fresh runner per call
def run_lre(
    circuit: Circuit,
    observable: Optional[Observable] = None,
    config: Optional[MitigationConfig] = None,
    noise: Optional[NoiseModel] = None,
    seed: Optional[int] = None,
    backend: Optional[ExpectationBackend] = None,
) -> MitigatedResult:
    return MitigationRunner(backend=backend, noise=noise).run_lre(circuit, config or MitigationConfig(), observable, seed)


def run_re(
    circuit: Circuit,
    observable: Optional[Observable] = None,
    d: int = 2,
    delta: int = 2,
    s_tot: int = 0,
    noise: Optional[NoiseModel] = None,
    seed: Optional[int] = None,
    backend: Optional[ExpectationBackend] = None,
) -> MitigatedResult:
    return MitigationRunner(backend=backend, noise=noise).run_re(circuit, d, delta, s_tot, observable, seed)


def run_unmitigated(
    circuit: Circuit,
    observable: Optional[Observable] = None,
    s_tot: int = 0,
    noise: Optional[NoiseModel] = None,
    seed: Optional[int] = None,
    backend: Optional[ExpectationBackend] = None,
) -> ExpectationEstimate:
    return MitigationRunner(backend=backend, noise=noise).run_unmitigated(circuit, s_tot, observable, seed)
