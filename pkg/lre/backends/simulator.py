import hashlib
import logging
from typing import Optional

import numpy as np

from ..circuit import Circuit
from ..config import Settings, get_settings
from ..noise_sim import ExpectationEstimate, NoiseModel, sample_expectation, simulate_exact
from ..qasm_io import emit_json
from .base import CircuitTask
from .cache import CacheFacade, create_cache

logger = logging.getLogger(__name__)


class SimulatorBackend:
    """Runs tasks on the embedded density-matrix simulator.

    Outcome probabilities of each distinct circuit are memoized, so repeated
    trials only pay for shot sampling.
    """

    def __init__(
        self,
        noise: Optional[NoiseModel] = None,
        settings: Optional[Settings] = None,
        cache_facade: Optional[CacheFacade] = None,
    ) -> None:
        self.settings = settings or get_settings()
        self.noise = noise if noise is not None else NoiseModel.from_settings(self.settings)
        self.cache_facade = cache_facade or CacheFacade(create_cache(self.settings))
        self._probabilities = self.cache_facade.memoize(self._key)(self.probabilities_uncached)

    def _key(self, circuit: Circuit) -> str:
        payload = "|".join([emit_json(circuit, indent=None), self.noise.model_dump_json(), str(self.settings.max_qubits)])
        return "probs:" + hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def probabilities_uncached(self, circuit: Circuit) -> np.ndarray:
        return simulate_exact(circuit, self.noise, self.settings.max_qubits).probabilities()

    def estimate(self, task: CircuitTask) -> ExpectationEstimate:
        probs = self._probabilities(task.circuit)
        weights = task.observable.diagonal(task.circuit.width)
        exact = float(np.dot(weights, probs))
        if task.shots == 0:
            return ExpectationEstimate(value=exact, shots=0, exact_value=exact)
        value = sample_expectation(probs, weights, task.shots, np.random.default_rng(task.seed))
        logger.debug("circuit %d %s: %.6f (exact %.6f, %d shots)", task.index, task.scale_factors, value, exact, task.shots)
        return ExpectationEstimate(value=value, shots=task.shots, exact_value=exact)
