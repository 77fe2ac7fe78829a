"""Desk-scale reproduction checks. Run with ``poe test-all`` (marked slow)."""
import numpy as np
import pytest

from lre.bench import ExperimentSpec, run_experiment
from lre.budget import predicted_std
from lre.config import Settings
from lre.interpolation import default_scale_factors, eta_coefficients
from lre.noise_sim import NoiseModel
from lre.protocol import MitigationConfig, Strategy

pytestmark = pytest.mark.slow


def test_exact_mode_error_ordering_on_ghz_mirrors():
    spec = ExperimentSpec(
        sweep="qubits",
        values=(2, 3, 4),
        trials=1,
        base=MitigationConfig(d=2, delta=2, s_tot=0),
        noise=NoiseModel(p1=0.04, p2=0.08),
    )
    stats = run_experiment(spec, settings=Settings())
    for n in spec.values:
        lre = stats.row(n, Strategy.LRE)
        re = stats.row(n, Strategy.RE)
        raw = stats.row(n, Strategy.UNMITIGATED)
        assert lre.mean_abs_error < re.mean_abs_error < raw.mean_abs_error
        assert lre.improvement_pct >= 50.0


def test_shot_noise_shrinks_with_budget():
    spec = ExperimentSpec(
        sweep="shots",
        values=(10**4, 10**5, 10**6),
        trials=10,
        qubits=6,
        base=MitigationConfig(d=2),
        seed=1,
    )
    stats = run_experiment(spec, settings=Settings())
    stds = [stats.row(s, Strategy.LRE).std for s in spec.values]
    assert stds[0] > stds[1] > stds[2]
    eta = eta_coefficients(default_scale_factors(12, 2, 2))
    bound = predicted_std(eta, 10**6)
    assert bound / 2 <= stds[2] <= 2 * bound


def test_chunk_sweep_reduces_to_re_and_improves():
    spec = ExperimentSpec(
        sweep="chunks",
        values=(1, 2, 4, 8, 16),
        trials=1,
        qubits=8,
        base=MitigationConfig(d=2, s_tot=0),
    )
    stats = run_experiment(spec, settings=Settings())
    assert stats.row(1, Strategy.LRE).mean == stats.row(1, Strategy.RE).mean
    errors = [stats.row(l, Strategy.LRE).mean_abs_error for l in spec.values]
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))


def test_random_mirrors_keep_error_bars_flat():
    spec = ExperimentSpec(
        family="random",
        sweep="qubits",
        values=(3, 4, 5),
        trials=10,
        half_depth=2,
        p_cnot=0.9,
        base=MitigationConfig(d=2),
        seed=2,
    )
    stats = run_experiment(spec, settings=Settings())
    lre = [stats.row(n, Strategy.LRE) for n in spec.values]
    re = [stats.row(n, Strategy.RE) for n in spec.values]
    assert np.mean([r.mean_abs_error for r in lre]) < np.mean([r.mean_abs_error for r in re])
    stds = [r.std for r in lre]
    assert max(stds) < 2 * min(stds)
