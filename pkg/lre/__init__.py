from . import config
from .circuit import Chunking, Circuit, FoldMode, Gate, GateKind, Layer, chunk_circuit, fold_chunk, fold_circuit, gate, inverse
from .errors import BudgetError, CircuitFormatError, InvalidScaleFactor, LREError, SimulationError, SingularSampleMatrix
from .interpolation import (
    EtaCoefficients,
    ScaleFactorConfig,
    default_scale_factors,
    eta_by_determinants,
    eta_coefficients,
    interpolate_at,
    lre_combine,
    sample_matrix,
)
from .budget import BudgetReport, allocate_shots, overhead, overhead_curve
from .noise_sim import DiagonalObservable, NoiseModel, ZeroProjector, estimate_expectation, simulate_exact
from .qasm_io import emit_json, emit_qasm, load_circuit, parse_json, parse_qasm
from .protocol import MitigatedResult, MitigationConfig, MitigationRunner, Strategy, run_lre, run_re, run_unmitigated
from .bench import ExperimentSpec, TrialStatistics, ghz_mirror, random_mirror, run_experiment

__all__ = [
    "config",
    "Chunking",
    "Circuit",
    "FoldMode",
    "Gate",
    "GateKind",
    "Layer",
    "chunk_circuit",
    "fold_chunk",
    "fold_circuit",
    "gate",
    "inverse",
    "BudgetError",
    "CircuitFormatError",
    "InvalidScaleFactor",
    "LREError",
    "SimulationError",
    "SingularSampleMatrix",
    "EtaCoefficients",
    "ScaleFactorConfig",
    "default_scale_factors",
    "eta_by_determinants",
    "eta_coefficients",
    "interpolate_at",
    "lre_combine",
    "sample_matrix",
    "BudgetReport",
    "allocate_shots",
    "overhead",
    "overhead_curve",
    "DiagonalObservable",
    "NoiseModel",
    "ZeroProjector",
    "estimate_expectation",
    "simulate_exact",
    "emit_json",
    "emit_qasm",
    "load_circuit",
    "parse_json",
    "parse_qasm",
    "MitigatedResult",
    "MitigationConfig",
    "MitigationRunner",
    "Strategy",
    "run_lre",
    "run_re",
    "run_unmitigated",
    "ExperimentSpec",
    "TrialStatistics",
    "ghz_mirror",
    "random_mirror",
    "run_experiment",
]
