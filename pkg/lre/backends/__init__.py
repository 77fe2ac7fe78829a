"""Expectation backends: protocol, simulator and synthetic providers, cache facade.

Public exports:
- CircuitTask, ExpectationBackend protocol
- SimulatorBackend, SyntheticBackend
- CacheFacade, create_cache
"""
from .base import CircuitTask, ExpectationBackend
from .cache import CacheFacade, create_cache
from .simulator import SimulatorBackend
from .synthetic import SyntheticBackend

__all__ = [
    "CircuitTask",
    "ExpectationBackend",
    "CacheFacade",
    "create_cache",
    "SimulatorBackend",
    "SyntheticBackend",
]
