import json

import numpy as np
import pytest

from set_thermo import polarization as pol
from set_thermo.errors import ValidationError
from set_thermo.sampling import ginibre_states, haar_unitaries, make_rng
from set_thermo.states import matrix_to_json


def test_diagonal_example():
    dec = pol.characteristic_decomposition(np.diag([0.5, 0.3, 0.2]))
    np.testing.assert_allclose(dec.weights, [0.2, 0.2, 0.6], atol=1e-15)
    np.testing.assert_allclose(dec.pure_part, np.diag([1, 0, 0]), atol=1e-15)
    np.testing.assert_allclose(dec.discriminating_part, np.diag([0.5, 0.5, 0]), atol=1e-15)
    np.testing.assert_allclose(dec.unpolarized_part, np.eye(3) / 3)
    assert pol.classify_regularity(dec).label == "regular"


def test_extreme_weights():
    dec = pol.characteristic_decomposition(np.eye(3) / 3)
    np.testing.assert_allclose(dec.weights, [0, 0, 1], atol=1e-15)
    psi = np.array([1, 1j, 1]) / np.sqrt(3)
    dec = pol.characteristic_decomposition(np.outer(psi, psi.conj()))
    np.testing.assert_allclose(dec.weights, [1, 0, 0], atol=1e-12)


def test_two_eigenstate_example_is_nonregular():
    dec = pol.characteristic_decomposition(pol.two_eigenstate_example())
    np.testing.assert_allclose(np.real(dec.discriminating_part), np.diag([0.25, 0.25, 0.5]), atol=1e-15)
    report = pol.classify_regularity(dec)
    assert report.label == "nonregular" and report.m == 3
    assert not report.borderline


def test_equal_ips_have_no_discriminating_component():
    # P1 == P2 means lambda_2 == lambda_3
    u = haar_unitaries(3, 1, make_rng(1))[0]
    rho = (u * np.array([0.6, 0.2, 0.2])) @ u.conj().T
    report = pol.classify_regularity(pol.characteristic_decomposition(rho))
    assert not report.has_discriminating_component
    assert report.label == "regular"
    assert report.weights[1] == pytest.approx(0.0, abs=1e-12)


def test_reconstruction_and_ranks():
    rho = ginibre_states(3, 2000, make_rng(3))
    for m in rho:
        dec = pol.characteristic_decomposition(m)
        assert np.max(np.abs(dec.reconstruct() - m)) < 1e-12
        assert np.linalg.matrix_rank(dec.pure_part, tol=1e-9) == 1
        assert np.linalg.matrix_rank(dec.discriminating_part, tol=1e-9) == 2
        assert dec.discriminating_real_rank in (2, 3)
        assert min(dec.weights) >= -1e-15


def test_rejects_wrong_dimension():
    with pytest.raises(ValidationError):
        pol.characteristic_decomposition(np.eye(2) / 2)


def test_borderline_flag():
    # a real part whose third singular value sits just above the threshold
    eps = 2e-9
    v1 = np.array([1, 1j * np.sqrt(eps), 0])
    v1 = v1 / np.linalg.norm(v1)
    v2 = np.array([0, 0, 1.0])
    v3 = np.cross(v1.conj(), v2.conj())
    basis = np.column_stack([v1, v2, v3])
    rho = (basis * np.array([0.5, 0.3, 0.2])) @ basis.conj().T
    report = pol.classify_regularity(pol.characteristic_decomposition(rho))
    assert report.borderline


def test_json_report():
    m = matrix_to_json(pol.two_eigenstate_example().matrix)
    report = pol.regularity_report(np.array(m["re"]) + 1j * np.array(m["im"]))
    text = json.dumps(report)
    assert json.loads(text)["label"] == "nonregular"
