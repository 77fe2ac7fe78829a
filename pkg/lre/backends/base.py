from dataclasses import dataclass, field
from typing import Protocol, Tuple

from ..circuit import Circuit
from ..noise_sim import ExpectationEstimate, Observable, ZeroProjector


@dataclass(frozen=True)
class CircuitTask:
    """One noise-scaled circuit to evaluate; `seed` is already derived for this task."""

    index: int
    circuit: Circuit
    scale_factors: Tuple[int, ...]
    shots: int = 0
    seed: int = 0
    observable: Observable = field(default_factory=ZeroProjector)


class ExpectationBackend(Protocol):
    """Protocol for backends returning an expectation value for a circuit task."""

    def estimate(self, task: CircuitTask) -> ExpectationEstimate: ...
