"""Density matrices, Hamiltonians, Gibbs states and coherence.

Energies are dimensionless with k_B = hbar = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import entr

from . import _tolerances as tol
from .errors import ValidationError
from .spectra import Spectrum, SpectralSummary, check_spectra, summarize_spectrum

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _as_square(m):
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix contains non-finite entries")
    return arr


def hermiticity_error(m):
    """Largest absolute entry of ``m - m^dagger``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, *, atol=tol.HERMITIAN_TOL):
    arr = _as_square(m)
    scale = max(1.0, float(np.max(np.abs(arr))))
    err = hermiticity_error(arr)
    if err > atol * scale:
        raise ValidationError(f"matrix is not Hermitian (max asymmetry {err:.3e})")
    return arr


def _fix_phases(vecs, *, atol=1e-12):
    # first component with non-negligible magnitude made real and positive
    vecs = np.array(vecs, dtype=complex)
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        idx = int(np.argmax(np.abs(col) > atol * max(1.0, np.abs(col).max())))
        phase = col[idx] / abs(col[idx])
        vecs[:, j] = col / phase
    return vecs


def eigendecompose(m, *, atol=tol.HERMITIAN_TOL):
    """Eigenvalues in descending order and matching orthonormal eigenvectors.

    Columns of the returned ``V`` are eigenvectors, phased so the first
    non-negligible component is real and positive, so ``m = V diag(w) V^dagger``.
    """
    arr = check_hermitian(m, atol=atol)
    herm = 0.5 * (arr + arr.conj().T)
    w, v = np.linalg.eigh(herm)
    order = np.argsort(-w, kind="stable")
    return w[order], _fix_phases(v[:, order])


@dataclass(frozen=True)
class DensityMatrix:
    """Positive semidefinite, Hermitian, unit-trace matrix."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = check_hermitian(np.asarray(self.matrix, dtype=complex))
        tr = np.trace(arr)
        if abs(tr - 1.0) > tol.TRACE_TOL:
            raise ValidationError(f"trace is {tr.real:.12g}, expected 1")
        w = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
        if w.min() < -tol.PSD_TOL:
            raise ValidationError(f"matrix has negative eigenvalue {w.min():.3e}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def d(self):
        return self.matrix.shape[0]

    def spectrum(self):
        w = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))
        w = np.clip(w, 0.0, None)
        return Spectrum.from_eigenvalues(w / w.sum())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class Hamiltonian:
    """Hermitian energy operator."""

    matrix: np.ndarray = field(repr=False)
    diagonal: bool = False

    def __post_init__(self):
        arr = np.array(check_hermitian(self.matrix))
        if self.diagonal and np.any(arr != np.diag(np.diag(arr))):
            raise ValidationError("Hamiltonian flagged diagonal has off-diagonal entries")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def from_energies(cls, energies):
        e = np.asarray(energies, dtype=float)
        if e.ndim != 1 or e.size < 1:
            raise ValidationError("energies must be a non-empty 1-d sequence")
        return cls(np.diag(e), diagonal=True)

    @property
    def d(self):
        return self.matrix.shape[0]

    def energies(self):
        """Eigenvalues in ascending order."""
        if self.diagonal:
            return np.sort(np.real(np.diag(self.matrix)))
        return np.linalg.eigvalsh(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class TransverseIsingParams:
    h_field: float
    j_coupling: float = 1.0

    def __post_init__(self):
        if self.j_coupling != 1.0:
            raise ValidationError("the coupling J is fixed to 1")
        if not self.h_field >= 0:
            raise ValidationError("h_field must be non-negative")

    def hamiltonian(self):
        """``H = -J sigma_z - h sigma_x``."""
        return Hamiltonian(-self.j_coupling * SIGMA_Z - self.h_field * SIGMA_X)


@dataclass(frozen=True)
class ThermalSpectrum:
    probabilities: Spectrum
    partition_function: float
    temperature: float
    log_partition_function: float


def _boltzmann(energies, temperature):
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size < 1:
        raise ValidationError("energies must be a non-empty 1-d sequence")
    if math.isnan(temperature) or temperature <= 0:
        raise ValidationError(f"temperature must be positive, got {temperature}")
    e_min = float(e.min())
    if math.isinf(temperature):
        w = np.ones_like(e)
        log_z = math.log(e.size)
    else:
        w = np.exp(-(e - e_min) / temperature)
        log_z = math.log(w.sum()) - e_min / temperature
    return w / w.sum(), log_z


def gibbs_spectrum(energies, temperature):
    """Boltzmann populations ``exp(-E_i / T) / Z``, sorted descending.

    Weights are computed after shifting by the minimum energy, so small
    temperatures never overflow. ``temperature = inf`` gives the uniform
    spectrum.

    Examples
    --------
    >>> th = gibbs_spectrum([0.0, 2.0, 3.0], 1.0)
    >>> round(th.partition_function, 6)
    1.185122
    """
    p, log_z = _boltzmann(energies, float(temperature))
    with np.errstate(over="ignore"):
        z = math.exp(log_z) if log_z < 709 else math.inf
    return ThermalSpectrum(
        probabilities=Spectrum.from_eigenvalues(p),
        partition_function=z,
        temperature=float(temperature),
        log_partition_function=log_z,
    )


def gibbs_state(h, temperature):
    """Thermal state ``exp(-H/T) / Z`` built in the eigenbasis of ``h``."""
    mat = h.matrix if isinstance(h, Hamiltonian) else h
    w, v = eigendecompose(mat)
    p, _ = _boltzmann(w, float(temperature))
    rho = (v * p) @ v.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


@dataclass(frozen=True)
class IsingTemperatures:
    order_parameter: float
    tau_scaled: float
    tau_unscaled: float


def transverse_ising(params, beta):
    """SET of the thermal transverse-field Ising qubit.

    ``order_parameter`` is ``tanh(beta * sqrt(1 + h^2))``; ``tau_scaled`` keeps
    the ``sqrt(1 + h^2)`` energy scale (so it reproduces ``1/beta``), and
    ``tau_unscaled`` is the plain spectral SET ``1 / atanh(P)``.
    """
    if not beta > 0:
        raise ValidationError("beta must be positive")
    scale = math.sqrt(1.0 + params.h_field ** 2)
    x = beta * scale
    p = math.tanh(x)
    # 1 + P = 2/(1+q), 1 - P = 2q/(1+q) with q = exp(-2x); logs taken analytically
    # so P rounding to 1 at large beta does not lose the ratio
    log1p_q = math.log1p(math.exp(-2.0 * x))
    log_one_plus = math.log(2.0) - log1p_q
    log_one_minus = math.log(2.0) - 2.0 * x - log1p_q
    log_ratio = log_one_plus - log_one_minus
    tau_scaled = 2.0 * scale / log_ratio
    return IsingTemperatures(
        order_parameter=p,
        tau_scaled=tau_scaled,
        tau_unscaled=tau_scaled / scale,
    )


def bloch_qubit(r):
    """Qubit state ``(I + r . sigma) / 2`` for a Bloch vector with ``|r| <= 1``."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValidationError("Bloch vector must have three components")
    if np.linalg.norm(r) > 1.0 + tol.IDENTITY_TOL:
        raise ValidationError(f"Bloch vector norm {np.linalg.norm(r):.6g} exceeds 1")
    rho = 0.5 * (np.eye(2) + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
    return DensityMatrix(rho)


def _check_basis(basis, d, atol=1e-10):
    v = np.asarray(basis, dtype=complex)
    if v.shape != (d, d):
        raise ValidationError(f"basis must be {d}x{d}, got {v.shape}")
    err = np.max(np.abs(v.conj().T @ v - np.eye(d)))
    if err > atol:
        raise ValidationError(f"basis is not orthonormal (error {err:.3e})")
    return v


def _matrix(rho):
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def dephase(rho, basis=None):
    """Remove coherences of ``rho`` in the basis given by the columns of ``basis``."""
    m = _matrix(rho)
    d = m.shape[0]
    v = np.eye(d, dtype=complex) if basis is None else _check_basis(basis, d)
    populations = np.real(np.einsum("ij,jk,ki->i", v.conj().T, m, v))
    return DensityMatrix((v * populations) @ v.conj().T)


def rel_entropy_coherence(rho, basis=None, *, atol=tol.PSD_TOL):
    """Relative entropy of coherence ``S(rho_diag) - S(rho)`` in ``basis``.

    The computational basis is used when ``basis`` is None.
    """
    m = _matrix(rho)
    d = m.shape[0]
    v = np.eye(d, dtype=complex) if basis is None else _check_basis(basis, d)
    populations = np.clip(np.real(np.einsum("ij,jk,ki->i", v.conj().T, m, v)), 0.0, None)
    w = np.clip(np.linalg.eigvalsh(0.5 * (m + m.conj().T)), 0.0, None)
    c = float(np.sum(entr(populations)) - np.sum(entr(w)))
    if c < -atol:
        raise ValidationError(f"negative coherence {c:.3e}; is rho a valid state?")
    return max(c, 0.0)


def spectral_summary(rho):
    """All spectral scalars (purity, P_d, P_p, SET, inverse SET, entropies) of ``rho``."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    return summarize_spectrum(rho.spectrum().values)


# JSON matrix format: {"d": n, "re": [[...]], "im": [[...]]}

def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    return {"d": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(obj):
    """Parse the JSON matrix format (dict, JSON text or file path)."""
    if isinstance(obj, (str, Path)):
        raw = str(obj)
        if Path(raw).exists():
            text = Path(raw).read_text()
        elif raw.lstrip().startswith("{"):
            text = raw
        else:
            raise ValidationError(f"no such file: {raw}")
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "d" not in obj or "re" not in obj:
        raise ValidationError("matrix JSON needs keys 'd' and 're' (and optionally 'im')")
    try:
        d = int(obj["d"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix entries: {exc}") from exc
    if re.shape != (d, d) or im.shape != (d, d):
        raise ValidationError(f"'re'/'im' must both be {d}x{d}")
    return re + 1j * im


def load_density_matrix(obj):
    return DensityMatrix(matrix_from_json(obj))


def load_hamiltonian(obj):
    return Hamiltonian(matrix_from_json(obj))


__all__ = [
    "DensityMatrix", "Hamiltonian", "TransverseIsingParams", "ThermalSpectrum",
    "IsingTemperatures", "SpectralSummary", "eigendecompose", "gibbs_spectrum",
    "gibbs_state", "transverse_ising", "bloch_qubit", "dephase",
    "rel_entropy_coherence", "spectral_summary", "matrix_to_json",
    "matrix_from_json", "load_density_matrix", "load_hamiltonian", "check_spectra",
]
