"""Sampling overhead and shot allocation.

With ``s_i`` shots on circuit i, the variance of ``sum(eta_i * z_i)`` is
minimized by ``s_i ∝ |eta_i|``, costing ``c = gamma**2`` times the shots of an
unmitigated estimate (``gamma = sum|eta_i|``). An equal split costs
``c_tilde = M * sum(eta_i**2) >= c``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import BudgetError
from .interpolation import EtaCoefficients, default_scale_factors, eta_coefficients

CURVE_COLUMNS = ["l", "d", "delta", "gamma", "c", "c_tilde"]


class BudgetReport(BaseModel):
    """Overhead metrics plus the integer shot split (all zeros in exact mode, ``s_tot == 0``)."""

    model_config = ConfigDict(frozen=True)

    gamma: float
    gamma_tilde: float
    c: float
    c_tilde: float
    allocations: Tuple[int, ...]
    s_tot: int = Field(ge=0)

    @model_validator(mode="after")
    def _allocations_sum(self) -> "BudgetReport":
        if sum(self.allocations) != self.s_tot:
            raise ValueError(f"allocations sum to {sum(self.allocations)}, expected {self.s_tot}")
        return self


def allocate_shots(eta: EtaCoefficients, s_tot: int) -> Tuple[int, ...]:
    """Largest-remainder split of `s_tot` proportional to ``|eta_i|`` with at least one shot each.

    Quotas are computed in exact rational arithmetic so that equal remainders
    tie deterministically (lower index wins).
    """
    m = len(eta)
    if s_tot < m:
        raise BudgetError(f"shot budget {s_tot} is smaller than the number of circuits {m}")
    weights = [Fraction(abs(v)) for v in eta.values]
    alloc: List[Optional[int]] = [None] * m
    # Circuits whose proportional share is below one shot are pinned to the floor.
    while True:
        free = [i for i in range(m) if alloc[i] is None]
        budget = s_tot - sum(a for a in alloc if a is not None)
        total = sum(weights[i] for i in free)
        quotas = {i: (budget * weights[i] / total if total else Fraction(budget, len(free))) for i in free}
        pinned = [i for i in free if quotas[i] < 1]
        if not pinned:
            break
        for i in pinned:
            alloc[i] = 1
    floors = {i: math.floor(q) for i, q in quotas.items()}
    leftover = budget - sum(floors.values())
    order = sorted(free, key=lambda i: (-(quotas[i] - floors[i]), i))
    for i in order[:leftover]:
        floors[i] += 1
    for i, s in floors.items():
        alloc[i] = s
    return tuple(int(a) for a in alloc)


def overhead(eta: EtaCoefficients, s_tot: int) -> BudgetReport:
    """Overhead metrics and shot allocation; ``s_tot=0`` requests exact (shot-free) evaluation."""
    values = eta.as_array()
    gamma = float(np.sum(np.abs(values)))
    gamma_tilde = float(np.sqrt(np.sum(values**2)))
    if s_tot == 0:
        allocations = (0,) * len(eta)
    else:
        allocations = allocate_shots(eta, s_tot)
    return BudgetReport(
        gamma=gamma,
        gamma_tilde=gamma_tilde,
        c=gamma**2,
        c_tilde=len(eta) * gamma_tilde**2,
        allocations=allocations,
        s_tot=s_tot,
    )


def predicted_std(eta: EtaCoefficients, s_tot: int) -> float:
    """Upper bound ``gamma / (2 sqrt(s_tot))`` on the std of a projector estimate under optimal allocation."""
    if s_tot <= 0:
        return 0.0
    return float(np.sum(np.abs(eta.as_array()))) / (2.0 * math.sqrt(s_tot))


def _curve_row(l: int, d: int, delta: int) -> dict:
    report = overhead(eta_coefficients(default_scale_factors(l, d, delta)), 0)
    return {"l": l, "d": d, "delta": delta, "gamma": report.gamma, "c": report.c, "c_tilde": report.c_tilde}


def overhead_curve(l_range: Iterable[int], d: int, delta: int = 2) -> pd.DataFrame:
    """Overhead ``c`` against the number of chunks l (default scale-factor pattern)."""
    return pd.DataFrame([_curve_row(l, d, delta) for l in l_range], columns=CURVE_COLUMNS)


def delta_curve(l: int, d: int, deltas: Iterable[int]) -> pd.DataFrame:
    """Overhead ``c`` against the gap delta at fixed l."""
    return pd.DataFrame([_curve_row(l, d, delta) for delta in deltas], columns=CURVE_COLUMNS)
