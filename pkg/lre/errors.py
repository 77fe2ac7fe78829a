from typing import Optional


class LREError(Exception):
    """Base class for every failure raised by the toolkit."""


class InvalidScaleFactor(LREError, ValueError):
    """Scale factor is not an odd integer >= 1, or the gap is not even."""


class SingularSampleMatrix(LREError, ArithmeticError):
    """The sample matrix of a scale-factor configuration is (numerically) singular."""

    def __init__(self, message: str, pivot: Optional[int] = None) -> None:
        super().__init__(message)
        self.pivot = pivot


class CircuitFormatError(LREError, ValueError):
    """Malformed QASM or JSON circuit text.

    `line` is set for QASM input, `path` (e.g. ``$.layers[0][1]``) for JSON input.
    """

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None) -> None:
        prefix = f"line {line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(prefix + message)
        self.line = line
        self.path = path


class BudgetError(LREError, ValueError):
    """Shot budget too small for the number of circuits."""


class SimulationError(LREError, ValueError):
    """Circuit cannot be simulated (too wide, or a qubit index out of range)."""
