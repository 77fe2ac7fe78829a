"""Command-line front end.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a sample matrix
is singular. Flags override ``LRE_*`` environment settings.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from .backends import SimulatorBackend
from .bench import PRESETS, ExperimentSpec, improvement_table, run_experiment
from .budget import delta_curve, overhead, overhead_curve
from .circuit import FoldMode, chunk_circuit, fold_circuit
from .config import Settings, get_settings
from .errors import LREError, SingularSampleMatrix
from .interpolation import default_scale_factors, eta_by_determinants, eta_coefficients
from .noise_sim import DiagonalObservable, NoiseModel, ZeroProjector
from .protocol import MitigationConfig, MitigationRunner, Strategy
from .qasm_io import emit_json, emit_qasm, load_circuit
from .utils import fmt_vector, parse_int_list, parse_range

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; 2 is reserved for numerical failures here."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> List[int]:
    try:
        return parse_int_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _int_range(text: str) -> List[int]:
    try:
        return parse_range(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _float_list(text: str) -> List[float]:
    try:
        return [float(s) for s in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid number list: {text!r}") from e


# =========================
# Output helpers
# =========================


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)


def _csv(df: pd.DataFrame) -> str:
    buf = io.StringIO()
    df.to_csv(buf, index=False, float_format="%.12g", lineterminator="\n")
    return buf.getvalue()


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _noise(args: argparse.Namespace, settings: Settings) -> NoiseModel:
    p1 = settings.p1 if args.p1 is None else args.p1
    p2 = settings.p2 if args.p2 is None else args.p2
    return NoiseModel(p1=p1, p2=p2, enabled=bool(p1 or p2))


# =========================
# Subcommands
# =========================


def cmd_coeffs(args: argparse.Namespace, settings: Settings) -> int:
    delta = settings.delta if args.delta is None else args.delta
    config = default_scale_factors(args.layers, args.degree, delta)
    eta = eta_coefficients(config)
    budget = overhead(eta, 0)
    rows = pd.DataFrame({"vector": [fmt_vector(v) for v in config.vectors], "eta": list(eta.values)})
    deviation = None
    if args.check:
        check = eta_by_determinants(config)
        rows["eta_det"] = list(check.values)
        deviation = float((rows["eta"] - rows["eta_det"]).abs().max())
    summary = {"l": config.l, "d": config.d, "delta": delta, "M": config.size,
               "gamma": budget.gamma, "c": budget.c, "c_tilde": budget.c_tilde}
    if deviation is not None:
        summary["max_deviation"] = deviation

    if args.format == "json":
        payload = {**summary, "vectors": [list(v) for v in config.vectors], "eta": list(eta.values)}
        if args.check:
            payload["eta_det"] = rows["eta_det"].tolist()
        _write(_json(payload), args.out)
    else:
        _write(_csv(rows) + "\n" + _csv(pd.DataFrame([summary])), args.out)
    return EXIT_OK


def cmd_overhead(args: argparse.Namespace, settings: Settings) -> int:
    delta = settings.delta if args.delta is None else args.delta
    if args.delta_range is not None:
        if args.layers is None:
            raise ValueError("--delta-range needs --layers")
        frames = [delta_curve(args.layers, d, args.delta_range) for d in args.degree]
    else:
        if args.max_layers is None:
            raise ValueError("give --max-layers (c against l) or --layers with --delta-range (c against delta)")
        frames = [overhead_curve(range(1, args.max_layers + 1), d, delta) for d in args.degree]
    _write(_csv(pd.concat(frames, ignore_index=True)), args.out)
    return EXIT_OK


def cmd_fold(args: argparse.Namespace, settings: Settings) -> int:
    circuit = load_circuit(args.input)
    emit = args.emit or ("qasm" if Path(args.input).suffix.lower() == ".qasm" else "json")
    chunking = chunk_circuit(circuit, args.chunks)
    if args.all_vectors:
        delta = settings.delta if args.delta is None else args.delta
        vectors = default_scale_factors(args.chunks, args.degree, delta).vectors
        if args.out is None:
            raise ValueError("--all-vectors needs --out DIR")
    else:
        if args.lambdas is None:
            raise ValueError("give --lambdas or --all-vectors")
        if len(args.lambdas) != args.chunks:
            raise ValueError(f"--lambdas has {len(args.lambdas)} entries, --chunks is {args.chunks}")
        vectors = (tuple(args.lambdas),)

    for vec in vectors:
        folded = fold_circuit(circuit, chunking, vec, args.mode)
        text = emit_qasm(folded, barriers=args.barriers) if emit == "qasm" else emit_json(folded) + "\n"
        logger.info("folded %s: depth %d -> %d", fmt_vector(vec), circuit.depth, folded.depth)
        if args.out is None:
            _write(text, None)
        else:
            name = "folded_" + "-".join(str(v) for v in vec) + "." + emit
            _write(text, str(Path(args.out) / name))
    return EXIT_OK


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    circuit = load_circuit(args.input)
    seed = settings.seed if args.seed is None else args.seed
    shots = 0 if args.exact else (settings.shots if args.shots is None else args.shots)
    delta = settings.delta if args.delta is None else args.delta
    observable = ZeroProjector()
    if args.observable_weights is not None:
        observable = DiagonalObservable(weights=tuple(args.observable_weights))

    noise = _noise(args, settings)
    backend = SimulatorBackend(noise=noise, settings=settings)
    runner = MitigationRunner(backend=backend, settings=settings, threads=args.threads)
    config = MitigationConfig(
        d=args.degree, chunks=args.chunks, delta=delta, s_tot=shots, mode=args.mode, strategy=args.strategy,
    )
    result = runner.run(circuit, config, observable, seed)
    payload = {
        "input": str(args.input),
        "width": circuit.width,
        "depth": circuit.depth,
        "strategy": config.strategy.value,
        "seed": seed,
        "noise": noise.model_dump(mode="json"),
        "result": result.model_dump(mode="json"),
    }
    _write(_json(payload), args.out)
    return EXIT_OK


def _experiment_from_args(args: argparse.Namespace, settings: Settings) -> ExperimentSpec:
    fields = dict(PRESETS[args.preset]) if args.preset else {}
    base = {"d": 2, "chunks": None, "delta": settings.delta, "s_tot": settings.shots}
    for key in ("d", "chunks", "delta", "s_tot"):
        if key in fields:
            base[key] = fields.pop(key)
    overrides = {
        "d": args.degree, "chunks": args.chunks, "delta": args.delta, "s_tot": args.shots, "mode": args.mode,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    if args.exact:
        base["s_tot"] = 0

    flags = {
        "family": args.family, "sweep": args.sweep, "values": args.values, "qubits": args.qubits,
        "half_depth": args.half_depth, "p_cnot": args.p_cnot,
    }
    fields.update({k: v for k, v in flags.items() if v is not None})
    if "sweep" not in fields or "values" not in fields:
        raise ValueError("give --preset or both --sweep and --values")
    return ExperimentSpec(
        **fields,
        trials=settings.trials if args.trials is None else args.trials,
        base=MitigationConfig(**base),
        noise=_noise(args, settings),
        seed=settings.seed if args.seed is None else args.seed,
    )


def cmd_bench(args: argparse.Namespace, settings: Settings) -> int:
    spec = _experiment_from_args(args, settings)
    stats = run_experiment(spec, settings=settings, threads=args.threads)
    if args.format == "json":
        payload = {
            "experiment": spec.model_dump(mode="json"),
            "rows": [r.model_dump(mode="json") for r in stats.rows],
            "trials": [r.model_dump(mode="json") for r in stats.records],
        }
        _write(_json(payload), args.out)
    elif args.table:
        _write(_csv(improvement_table(stats)), args.out)
    else:
        _write(_csv(stats.to_frame()), args.out)
    return EXIT_OK


# =========================
# Parser
# =========================


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="Output file (directory for fold); stdout if omitted.")
    p.add_argument("--log-level", default=None, type=str.upper,
                   choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Overrides LRE_LOG_LEVEL.")


def _add_noise(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p1", type=float, default=None, help="Single-qubit damping probability (LRE_P1).")
    p.add_argument("--p2", type=float, default=None, help="Two-qubit damping probability (LRE_P2).")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="lre", description="Layerwise Richardson extrapolation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("coeffs", help="Scale-factor vectors, eta coefficients and overhead.")
    p.add_argument("--layers", "-l", type=int, required=True)
    p.add_argument("--degree", "-d", type=int, required=True)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--check", action="store_true", help="Also compute eta as determinant ratios.")
    _add_common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("overhead", help="Sampling overhead against l or against delta (CSV).")
    p.add_argument("--degree", "-d", type=_int_list, default=[1, 2], help="One or more degrees, e.g. 1,2.")
    p.add_argument("--max-layers", type=int, default=None)
    p.add_argument("--layers", "-l", type=int, default=None)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--delta-range", type=_int_range, default=None, help="Inclusive start:stop:step.")
    _add_common(p)
    p.set_defaults(func=cmd_overhead)

    p = sub.add_parser("fold", help="Fold a circuit with one or all scale-factor vectors.")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--chunks", "-l", type=int, required=True)
    p.add_argument("--lambdas", type=_int_list, default=None)
    p.add_argument("--all-vectors", action="store_true")
    p.add_argument("--degree", "-d", type=int, default=1)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--mode", choices=[m.value for m in FoldMode], default=FoldMode.LOCAL.value)
    p.add_argument("--emit", choices=["qasm", "json"], default=None)
    p.add_argument("--barriers", action="store_true", help="Separate layers with barriers in QASM output.")
    _add_common(p)
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("run", help="Mitigate one circuit on the embedded simulator (JSON).")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.LRE.value)
    p.add_argument("--degree", "-d", type=int, default=2)
    p.add_argument("--chunks", "-l", type=int, default=None, help="Default: one chunk per layer.")
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--exact", action="store_true", help="Exact expectation values (no shot noise).")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=[m.value for m in FoldMode], default=FoldMode.LOCAL.value)
    p.add_argument("--observable-weights", type=_float_list, default=None,
                   help="Diagonal observable, one weight per basis state (qubit 0 most significant).")
    p.add_argument("--threads", type=int, default=None)
    _add_noise(p)
    _add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="Run an experiment sweep (CSV, or JSON with per-trial values).")
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--family", choices=["ghz", "random"], default=None)
    p.add_argument("--sweep", choices=["qubits", "degree", "shots", "delta", "chunks"], default=None)
    p.add_argument("--values", type=_int_list, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--degree", "-d", type=int, default=None)
    p.add_argument("--chunks", "-l", type=int, default=None)
    p.add_argument("--delta", type=int, default=None)
    p.add_argument("--mode", choices=[m.value for m in FoldMode], default=None)
    p.add_argument("--qubits", type=int, default=None)
    p.add_argument("--half-depth", type=int, default=None)
    p.add_argument("--p-cnot", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--table", action="store_true", help="Print the per-value improvement table instead.")
    _add_noise(p)
    _add_common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = settings or get_settings()
    _configure_logging(args.log_level or settings.log_level)
    try:
        return args.func(args, settings)
    except SingularSampleMatrix as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (LREError, ValidationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
