import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from set_thermo import states as stt
from set_thermo.errors import ValidationError
from set_thermo.sampling import ginibre_states, haar_unitaries, make_rng
from set_thermo.spectra import bipartite_entropy


def test_density_matrix_validation():
    stt.DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValidationError):
        stt.DensityMatrix(np.eye(2))
    with pytest.raises(ValidationError):
        stt.DensityMatrix(np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(ValidationError):
        stt.DensityMatrix(np.diag([1.2, -0.2]))


def test_non_hermitian_error_reports_asymmetry():
    with pytest.raises(ValidationError, match="asymmetry"):
        stt.eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigendecompose_examples():
    w, v = stt.eigendecompose(np.eye(2) / 2)
    np.testing.assert_allclose(w, [0.5, 0.5])
    w, v = stt.eigendecompose(np.diag([0.2, 0.5, 0.3]))
    np.testing.assert_allclose(w, [0.5, 0.3, 0.2], atol=1e-15)
    np.testing.assert_allclose(np.abs(v), [[0, 0, 1], [1, 0, 0], [0, 1, 0]], atol=1e-15)
    h = stt.TransverseIsingParams(1.0).hamiltonian()
    w, v = stt.eigendecompose(h.matrix)
    np.testing.assert_allclose(w, [math.sqrt(2), -math.sqrt(2)], atol=1e-14)


def test_eigendecompose_reconstructs_and_is_phased(rng):
    for d in (2, 5, 9):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = a + a.conj().T
        w, v = stt.eigendecompose(m)
        assert np.all(np.diff(w) <= 0)
        np.testing.assert_allclose((v * w) @ v.conj().T, m, atol=1e-9 * np.linalg.norm(m))
        first = v[np.argmax(np.abs(v) > 1e-12, axis=0), np.arange(d)]
        np.testing.assert_allclose(first.imag, 0, atol=1e-15)
        assert np.all(first.real > 0)


def test_gibbs_spectrum_examples():
    th = stt.gibbs_spectrum([0.0, 2.0, 3.0], 1.0)
    # mpmath, 40 digits
    np.testing.assert_allclose(th.probabilities.values,
                               [0.84379473448133947, 0.11419519938459448, 0.042010066134066051],
                               rtol=1e-14)
    assert th.partition_function == pytest.approx(1.1851223516044766, rel=1e-14)
    np.testing.assert_allclose(stt.gibbs_spectrum([0.0, 1.0, 5.0], math.inf).probabilities.values,
                               [1 / 3] * 3)
    np.testing.assert_allclose(stt.gibbs_spectrum([0.0, 1.0, 5.0], 1e-3).probabilities.values,
                               [1.0, 0.0, 0.0])
    # no overflow far below the gap
    assert stt.gibbs_spectrum([1e3, 2e3], 1e-2).probabilities.values[0] == 1.0


@pytest.mark.parametrize("t", [0.0, -1.0, float("nan")])
def test_gibbs_rejects_bad_temperature(t):
    with pytest.raises(ValidationError):
        stt.gibbs_spectrum([0.0, 1.0], t)


def test_gibbs_state_examples():
    np.testing.assert_allclose(stt.gibbs_state(np.zeros((3, 3)), 0.7).matrix, np.eye(3) / 3)
    g = stt.gibbs_state(np.diag([0.0, 1.0, 2.0]), 1.0).matrix
    np.testing.assert_allclose(g, np.diag(np.diag(g)), atol=1e-15)
    h = stt.TransverseIsingParams(0.0).hamiltonian()
    w = np.sort(np.linalg.eigvalsh(stt.gibbs_state(h, 1.0).matrix))[::-1]
    e = math.exp(1.0)
    np.testing.assert_allclose(w, [e / (e + 1 / e), (1 / e) / (e + 1 / e)], atol=1e-14)


@pytest.mark.parametrize("d", [2, 4, 9, 16])
def test_gibbs_state_commutes(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = a + a.conj().T
    g = stt.gibbs_state(h, 0.8).matrix
    assert np.max(np.abs(g @ h - h @ g)) < 1e-9


def test_transverse_ising_examples():
    r = stt.transverse_ising(stt.TransverseIsingParams(0.0), 1.0)
    assert r.order_parameter == pytest.approx(math.tanh(1.0), rel=1e-15)
    assert r.tau_scaled == pytest.approx(1.0, rel=1e-14)
    r = stt.transverse_ising(stt.TransverseIsingParams(1.0), 0.5)
    assert r.tau_scaled == pytest.approx(2.0, rel=1e-14)
    assert r.tau_unscaled == pytest.approx(1 / (0.5 * math.sqrt(2)), rel=1e-14)
    r = stt.transverse_ising(stt.TransverseIsingParams(0.0), 1e3)
    assert r.order_parameter == 1.0 and r.tau_scaled == pytest.approx(1e-3, rel=1e-12)


@given(st.floats(0.0, 20.0), st.floats(1e-3, 50.0))
def test_tau_scaled_is_inverse_beta(h, beta):
    r = stt.transverse_ising(stt.TransverseIsingParams(h), beta)
    assert r.tau_scaled == pytest.approx(1 / beta, rel=1e-12)


@pytest.mark.parametrize("h", [0.0, 0.3, 1.0, 4.0])
@pytest.mark.parametrize("beta", [0.05, 0.5, 1.0, 3.0])
def test_ising_entropy_matches_binary_form(h, beta):
    rho = stt.gibbs_state(stt.TransverseIsingParams(h).hamiltonian(), 1 / beta)
    s_gibbs = stt.spectral_summary(rho).entropy
    p = stt.transverse_ising(stt.TransverseIsingParams(h), beta).order_parameter
    assert s_gibbs == pytest.approx(bipartite_entropy(p), abs=1e-12)


def test_ising_params_validation():
    with pytest.raises(ValidationError):
        stt.TransverseIsingParams(-1.0)
    with pytest.raises(ValidationError):
        stt.TransverseIsingParams(1.0, j_coupling=2.0)


def test_bloch_qubit():
    np.testing.assert_allclose(stt.bloch_qubit([0, 0, 0]).matrix, np.eye(2) / 2)
    np.testing.assert_allclose(stt.bloch_qubit([0, 0, 1]).matrix, np.diag([1, 0]))
    rho = stt.bloch_qubit([0.6, 0, 0])
    np.testing.assert_allclose(rho.spectrum().values, [0.8, 0.2], atol=1e-15)
    with pytest.raises(ValidationError):
        stt.bloch_qubit([1, 1, 0])


def test_dephase_and_coherence():
    diag = np.diag([0.7, 0.2, 0.1])
    np.testing.assert_allclose(stt.dephase(diag).matrix, diag)
    plus = np.full((2, 2), 0.5)
    np.testing.assert_allclose(stt.dephase(plus).matrix, np.eye(2) / 2)
    assert stt.rel_entropy_coherence(diag) == 0.0
    assert stt.rel_entropy_coherence(plus) == pytest.approx(math.log(2), abs=1e-14)
    with pytest.raises(ValidationError):
        stt.dephase(plus, basis=np.array([[1, 1], [0, 1]]))


def test_coherence_phase_invariance(rng):
    rho = ginibre_states(4, 1, rng)[0]
    basis = haar_unitaries(4, 1, rng)[0]
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 4))
    c1 = stt.rel_entropy_coherence(rho, basis)
    c2 = stt.rel_entropy_coherence(rho, basis * phases)
    assert c1 == pytest.approx(c2, abs=1e-12)
    d = stt.dephase(rho, basis)
    assert np.trace(d.matrix).real == pytest.approx(1.0, abs=1e-14)
    assert stt.rel_entropy_coherence(d, basis) < 1e-12


def test_spectral_summary_examples():
    s = stt.spectral_summary(np.eye(4) / 4)
    assert (s.gamma, s.p_global, s.tau) == (pytest.approx(0.25), 0.0, math.inf)
    assert s.entropy == pytest.approx(math.log(4), abs=1e-14)
    s = stt.spectral_summary(np.diag([1.0, 0.0]))
    assert s.gamma == 1.0 and s.p_global == 1.0 and s.beta == math.inf and s.entropy == 0.0
    s = stt.spectral_summary(np.diag([0.5, 0.3, 0.2]))
    assert s.p_global == pytest.approx(math.sqrt(0.07), abs=1e-14)
    assert s.entropy == pytest.approx(1.0296530140645735, abs=1e-14)


def test_summary_unitary_invariance(rng):
    for d in (2, 3, 6):
        rho = ginibre_states(d, 1, rng)[0]
        u = haar_unitaries(d, 1, rng)[0]
        a = stt.spectral_summary(rho).as_dict()
        b = stt.spectral_summary(u @ rho @ u.conj().T).as_dict()
        for key in a:
            assert b[key] == pytest.approx(a[key], abs=1e-10, rel=1e-10), key


def test_json_round_trip(tmp_path):
    rho = ginibre_states(3, 1, make_rng(5))[0]
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(stt.matrix_to_json(rho)))
    loaded = stt.load_density_matrix(path)
    np.testing.assert_array_equal(loaded.matrix, rho)
    h = stt.load_hamiltonian(json.dumps({"d": 2, "re": [[0, 1], [1, 0]]}))
    np.testing.assert_allclose(h.energies(), [-1, 1])


@pytest.mark.parametrize("payload", [
    '{"d": 2, "re": [[1, 0]]}',
    '{"re": [[1]]}',
    '{"d": 2, "re": [[0.5, 0.4], [0.1, 0.5]]}',
    "not json",
])
def test_json_rejects_malformed(payload, tmp_path):
    with pytest.raises(ValidationError):
        stt.load_density_matrix(payload if payload.startswith("{") else tmp_path / "missing.json")
