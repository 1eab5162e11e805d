import math

import numpy as np
import pytest

from set_thermo import sampling as sm
from set_thermo.errors import SamplingBudgetWarning, ValidationError
from set_thermo.spectra import global_purity_from_ips, set_temperature, spectrum_from_ips


def test_config_validation():
    with pytest.raises(ValidationError):
        sm.SamplerConfig(d=1, n=5)
    with pytest.raises(ValidationError):
        sm.SamplerConfig(d=3, n=0)
    with pytest.raises(ValidationError):
        sm.SamplerConfig(d=3, n=5, seed=-1)
    with pytest.raises(ValidationError):
        sm.SamplerConfig(d=3, n=5, method="bures")


def test_chunk_plan_depends_only_on_n():
    plan = sm.chunk_plan(20_000, 3)
    assert [c for c, _ in plan] == [8192, 8192, 3616]
    again = sm.chunk_plan(20_000, 3)
    assert [s.entropy for _, s in plan] == [s.entropy for _, s in again]


def test_ips_d2_uniform():
    ips = sm.sample_ips(sm.SamplerConfig(2, 50_000, seed=11))
    assert ips.shape == (50_000, 1)
    counts, _ = np.histogram(ips[:, 0], bins=10, range=(0, 1))
    assert np.all(np.abs(counts - 5000) < 300)


@pytest.mark.parametrize("d", [3, 4, 6])
def test_ips_valid_and_cover_region(d):
    ips = sm.sample_ips(sm.SamplerConfig(d, 5000, seed=2))
    assert np.all(np.diff(ips, axis=1) >= 0)
    assert ips.min() >= 0 and ips.max() <= 1
    lam = spectrum_from_ips(ips)
    assert np.all(lam >= 0)
    p = global_purity_from_ips(ips)
    # the ordering cut removes large radii more often, but both ends are reached
    assert p.min() < 0.05 and p.max() > 0.5


def test_ips_deterministic_across_threads(monkeypatch):
    cfg = sm.SamplerConfig(3, 20_000, seed=9)
    monkeypatch.setenv("SET_THERMO_THREADS", "1")
    a = sm.sample_ips(cfg)
    monkeypatch.setenv("SET_THERMO_THREADS", "4")
    b = sm.sample_ips(cfg)
    assert a.tobytes() == b.tobytes()
    small = sm.SamplerConfig(3, 10, seed=9)
    assert sm.sample_ips(small).tobytes() == sm.sample_ips(small).tobytes()


def test_ginibre_valid():
    rho = sm.sample_ginibre(sm.SamplerConfig(3, 2000, seed=4, method="ginibre"))
    assert rho.shape == (2000, 3, 3)
    np.testing.assert_allclose(np.trace(rho, axis1=1, axis2=2).real, 1.0, atol=1e-12)
    np.testing.assert_allclose(rho, np.conj(np.swapaxes(rho, 1, 2)), atol=0)
    assert np.linalg.eigvalsh(rho).min() >= -1e-14


def test_ginibre_qubit_mean_purity():
    # Hilbert-Schmidt moment: E[Tr rho^2] = 2d / (d^2 + 1) = 4/5 for d = 2
    rho = sm.sample_ginibre(sm.SamplerConfig(2, 200_000, seed=8, method="ginibre"))
    purity = np.einsum("nij,nji->n", rho, rho).real
    assert abs(purity.mean() - 0.8) < 1e-2


def test_uniform_entropy_histogram():
    lam = sm.sample_uniform_entropy(sm.SamplerConfig(2, 10_000, seed=1, method="uniform_entropy"))
    s = -np.sum(np.where(lam > 0, lam * np.log(np.where(lam > 0, lam, 1)), 0), axis=1)
    counts, _ = np.histogram(s, bins=10, range=(0, math.log(2)))
    assert np.all(np.abs(counts - 1000) <= 300)
    assert np.all(np.diff(lam, axis=1) <= 0)
    np.testing.assert_allclose(lam.sum(axis=1), 1.0, atol=1e-12)


def test_uniform_entropy_flat_at_1e5():
    cfg = sm.SamplerConfig(4, 100_000, seed=3, method="uniform_entropy")
    lam = sm.sample_uniform_entropy(cfg)
    s = -np.sum(lam * np.log(np.clip(lam, 1e-300, None)), axis=1)
    counts, _ = np.histogram(s, bins=20, range=(0, math.log(4)))
    assert np.max(np.abs(counts - 5000)) / 5000 < 0.10
    again = sm.sample_uniform_entropy(cfg)
    assert lam.tobytes() == again.tobytes()


def test_uniform_entropy_budget_warning():
    cfg = sm.SamplerConfig(8, 400, seed=0, method="uniform_entropy")
    with pytest.warns(SamplingBudgetWarning):
        out = sm.sample_uniform_entropy(cfg, budget_factor=1, batch=64)
    assert out.shape[0] < 400


def test_haar_unitary_properties():
    u = sm.haar_unitary(5, 1)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(5), atol=1e-10)
    assert abs(abs(np.linalg.det(u)) - 1) < 1e-10
    us = sm.haar_unitaries(2, 100_000, sm.make_rng(2))
    assert abs(np.mean(np.abs(us[:, 0, 0]) ** 2) - 0.5) < 1e-2


def test_haar_left_invariance():
    # a fixed rotation should not change the distribution of |U_00|^2
    rng = sm.make_rng(6)
    us = sm.haar_unitaries(3, 50_000, rng)
    v = sm.haar_unitary(3, 99)
    a = np.abs(us[:, 0, 0]) ** 2
    b = np.abs((v @ us)[:, 0, 0]) ** 2
    qa, qb = np.quantile(a, [0.25, 0.5, 0.75]), np.quantile(b, [0.25, 0.5, 0.75])
    np.testing.assert_allclose(qa, qb, atol=0.01)


def test_psa_examples():
    np.testing.assert_allclose(sm.psa_spectrum(sm.PsaParams((0, 1), 0.0)).values, [0.5, 0.5])
    np.testing.assert_allclose(sm.psa_spectrum(sm.PsaParams((0, 1, 2), math.inf)).values, [1, 0, 0])
    np.testing.assert_allclose(sm.psa_spectrum(sm.PsaParams((0, 1, 2), 1.0)).values,
                               [0.66524095577482189, 0.24472847105479765, 0.090030573170380458],
                               rtol=1e-14)
    with pytest.raises(ValidationError):
        sm.PsaParams((0, 1), -1.0)
    with pytest.raises(ValidationError):
        sm.PsaParams((0, float("nan")))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_psa_curve_monotone(d):
    rows = sm.psa_curve(sm.PsaParams.default(d), np.linspace(0, 15, 400))
    assert rows[0, 1] == math.inf
    assert rows[0, 2] == pytest.approx(math.log(d), abs=1e-14)
    assert np.all(np.diff(rows[:, 1]) < 0)
    assert np.all(np.diff(rows[:, 2]) < 0)
    assert rows[-1, 1] < 0.15 and rows[-1, 2] < 1e-4
    with pytest.raises(ValidationError):
        sm.psa_curve(sm.PsaParams.default(d), [0.0, 0.0, 1.0])
