from typing import Callable, Sequence

import numpy as np

from ..noise_sim import ExpectationEstimate
from .base import CircuitTask


class SyntheticBackend:
    """Expectation values given directly as a function of the scale-factor vector.

    The circuit is ignored. With shots, the value is treated as the success
    probability of a projector and binomial shot noise is added.
    """

    def __init__(self, fn: Callable[[Sequence[int]], float]) -> None:
        self.fn = fn

    def estimate(self, task: CircuitTask) -> ExpectationEstimate:
        exact = float(self.fn(task.scale_factors))
        if task.shots == 0:
            return ExpectationEstimate(value=exact, shots=0, exact_value=exact)
        p = min(max(exact, 0.0), 1.0)
        hits = np.random.default_rng(task.seed).binomial(task.shots, p)
        return ExpectationEstimate(value=hits / task.shots, shots=task.shots, exact_value=exact)
