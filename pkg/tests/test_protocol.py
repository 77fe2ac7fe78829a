import numpy as np
import pytest
from pydantic import ValidationError

from lre.backends import SimulatorBackend, SyntheticBackend
from lre.bench import ghz_mirror
from lre.config import Settings
from lre.errors import BudgetError
from lre.protocol import MitigationConfig, MitigationRunner, Strategy, run_lre, run_re, run_unmitigated


def _poly(lam):
    l1, l2, l3 = lam
    return 0.7 + 0.1 * l1 - 0.02 * l2 * l3 + 0.003 * l1**2 - 0.01 * l3


def test_config_validation():
    with pytest.raises(ValidationError):
        MitigationConfig(delta=3)
    with pytest.raises(ValidationError):
        MitigationConfig(d=0)
    assert MitigationConfig(strategy="re", chunks=5).chunks == 1
    assert MitigationConfig().resolve_chunks(6) == 6
    with pytest.raises(ValueError):
        MitigationConfig(chunks=7).resolve_chunks(6)


def test_polynomial_exactness_through_protocol():
    backend = SyntheticBackend(_poly)
    result = run_lre(ghz_mirror(2), config=MitigationConfig(d=2, chunks=3), backend=backend)
    assert result.value == pytest.approx(0.7, abs=1e-9)
    assert result.chunks == 3
    assert len(result.raw) == 10
    assert result.value == pytest.approx(sum(e * r.estimate for e, r in zip(result.eta.values, result.raw)), abs=1e-12)


def test_re_coefficients():
    backend = SyntheticBackend(lambda lam: 1.0)
    np.testing.assert_allclose(run_re(ghz_mirror(2), d=1, backend=backend).eta.values, (1.5, -0.5), atol=1e-12)
    np.testing.assert_allclose(
        run_re(ghz_mirror(2), d=2, backend=backend).eta.values, (15 / 8, -5 / 4, 3 / 8), atol=1e-12
    )


def test_single_chunk_lre_equals_re(noisy):
    runner = MitigationRunner(noise=noisy, settings=Settings())
    circuit = ghz_mirror(3)
    lre = runner.run_lre(circuit, MitigationConfig(d=2, chunks=1))
    re = runner.run_re(circuit, d=2)
    assert lre.eta == re.eta
    assert lre.value == re.value
    assert re.strategy is Strategy.RE


def test_noiseless_mitigation_is_exact(noiseless):
    for strategy in ("lre", "re"):
        config = MitigationConfig(d=2, strategy=strategy)
        result = run_lre(ghz_mirror(3), config=config, noise=noiseless)
        assert result.value == pytest.approx(1.0, abs=1e-9)
    assert run_unmitigated(ghz_mirror(3), noise=noiseless).value == pytest.approx(1.0)


def test_unmitigated_noisy_below_one(noisy):
    est = run_unmitigated(ghz_mirror(2), noise=noisy)
    assert est.value < 1.0
    assert est.shots == 0


def test_budget_discipline(noisy):
    runner = MitigationRunner(noise=noisy, settings=Settings())
    result = runner.run_lre(ghz_mirror(2), MitigationConfig(d=2, s_tot=10_000))
    assert sum(r.shots for r in result.raw) == 10_000
    assert result.budget.allocations == tuple(r.shots for r in result.raw)
    assert all(r.shots >= 1 for r in result.raw)
    assert runner.run_unmitigated(ghz_mirror(2), s_tot=10_000).shots == 10_000
    with pytest.raises(BudgetError):
        runner.run_lre(ghz_mirror(2), MitigationConfig(d=2, s_tot=5))


def test_determinism_and_thread_independence(noisy):
    config = MitigationConfig(d=2, s_tot=20_000)
    one = MitigationRunner(noise=noisy, settings=Settings(), threads=1).run_lre(ghz_mirror(2), config, seed=7)
    again = MitigationRunner(noise=noisy, settings=Settings(), threads=1).run_lre(ghz_mirror(2), config, seed=7)
    many = MitigationRunner(noise=noisy, settings=Settings(), threads=4).run_lre(ghz_mirror(2), config, seed=7)
    other = MitigationRunner(noise=noisy, settings=Settings(), threads=1).run_lre(ghz_mirror(2), config, seed=8)
    assert one == again == many
    assert other.value != one.value
    assert other.exact_value == one.exact_value


def test_bias_ordering_two_qubits(noisy):
    runner = MitigationRunner(backend=SimulatorBackend(noise=noisy, settings=Settings()))
    circuit = ghz_mirror(2)
    lre = runner.run_lre(circuit, MitigationConfig(d=2))
    re = runner.run_re(circuit, d=2)
    raw = runner.run_unmitigated(circuit)
    assert abs(lre.value - 1) < abs(re.value - 1) < abs(raw.value - 1)


def test_dispatch():
    backend = SyntheticBackend(lambda lam: 0.5)
    runner = MitigationRunner(backend=backend, settings=Settings())
    assert runner.run(ghz_mirror(1), MitigationConfig(strategy="unmitigated")).value == 0.5
    assert runner.run(ghz_mirror(1), MitigationConfig(strategy="re")).value == pytest.approx(0.5)
    with pytest.raises(ValueError):
        runner.run_lre(ghz_mirror(1), MitigationConfig(strategy="unmitigated"))
