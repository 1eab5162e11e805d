"""Spectral functionals: indices of purity, degree of purity, SET and entropies.

All functions take a single descending spectrum of length ``d`` or a stack of
them with shape ``(..., d)`` and broadcast over the leading axes. Scalars are
returned as Python floats, stacks as arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import entr

from . import _tolerances as tol
from .errors import NumericalError, ValidationError


def _scalar_or_array(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def check_spectra(values, *, trace_tol=tol.TRACE_TOL, clamp=tol.NEGATIVE_CLAMP,
                  order_tol=tol.IDENTITY_TOL):
    """Validate descending probability vectors and return a clean float array.

    Entries in ``[-clamp, 0)`` are set to zero and the rows renormalised.
    Raises ValidationError for anything else out of spec.
    """
    arr = np.array(values, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] < 2:
        raise ValidationError("a spectrum needs at least two entries")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("spectrum contains non-finite values")
    if np.any(arr < -clamp):
        raise ValidationError(f"negative probability {arr.min():.3e} below -{clamp:g}")
    total = arr.sum(axis=-1)
    if np.any(np.abs(total - 1.0) > trace_tol):
        worst = np.max(np.abs(total - 1.0))
        raise ValidationError(f"spectrum does not sum to 1 (off by {worst:.3e})")
    if np.any(np.diff(arr, axis=-1) > order_tol):
        raise ValidationError("spectrum is not in descending order")
    arr = np.clip(arr, 0.0, None)
    arr /= arr.sum(axis=-1, keepdims=True)
    return arr


def check_ips(values, *, order_tol=tol.IDENTITY_TOL):
    """Validate ordered indices of purity ``0 <= P_(1) <= ... <= P_(d-1) <= 1``."""
    arr = np.array(values, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] < 1:
        raise ValidationError("indices of purity need at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("indices of purity contain non-finite values")
    if np.any(arr < -order_tol) or np.any(arr > 1.0 + order_tol):
        raise ValidationError("indices of purity must lie in [0, 1]")
    if np.any(np.diff(arr, axis=-1) < -order_tol):
        raise ValidationError("indices of purity must be non-decreasing")
    return np.clip(arr, 0.0, 1.0)


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalue spectrum of a unit-trace state."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = check_spectra(self.values)
        if arr.ndim != 1:
            raise ValidationError("Spectrum holds a single probability vector")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_eigenvalues(cls, eigenvalues, *, clamp=tol.NEGATIVE_CLAMP):
        """Sort (stable, descending), clamp tiny negatives and renormalise."""
        arr = np.asarray(eigenvalues, dtype=float).ravel()
        order = np.argsort(-arr, kind="stable")
        return cls(arr[order])

    @property
    def d(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __repr__(self):
        return f"Spectrum({np.array2string(self.values, precision=6)})"


@dataclass(frozen=True)
class IndicesOfPurity:
    """The ``d - 1`` non-decreasing indices of purity of a spectrum."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = check_ips(self.values)
        if arr.ndim != 1:
            raise ValidationError("IndicesOfPurity holds a single vector")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def d(self):
        return self.values.shape[0] + 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __repr__(self):
        return f"IndicesOfPurity({np.array2string(self.values, precision=6)})"


@dataclass(frozen=True)
class SpectralSummary:
    """Scalar descriptors of one state."""

    gamma: float
    p_global: float
    p_pairwise: float
    tau: float
    beta: float
    entropy: float
    bipartite_entropy: float

    def as_dict(self):
        return {
            "gamma": self.gamma,
            "p_global": self.p_global,
            "p_pairwise": self.p_pairwise,
            "tau": self.tau,
            "beta": self.beta,
            "entropy": self.entropy,
            "bipartite_entropy": self.bipartite_entropy,
        }


def ip_weights(d):
    """Weights ``1 / (k (k + 1))`` for ``k = 1 .. d-1``."""
    k = np.arange(1, d, dtype=float)
    return 1.0 / (k * (k + 1.0))


def indices_of_purity(s):
    """Indices of purity ``P_(k) = sum_{i<=k} lambda_i - k lambda_{k+1}``.

    Examples
    --------
    >>> indices_of_purity([0.5, 0.3, 0.2])
    array([0.2, 0.4])
    """
    lam = check_spectra(s)
    d = lam.shape[-1]
    k = np.arange(1, d, dtype=float)
    # P_(k) = sum_{m<=k} m (lambda_m - lambda_{m+1}): a cumulative sum of
    # non-negative steps, so the ordering holds exactly in floating point
    steps = k * (lam[..., :-1] - lam[..., 1:])
    return np.clip(np.cumsum(steps, axis=-1), 0.0, 1.0)


def spectrum_from_ips(p, *, negative_tol=tol.NEGATIVE_CLAMP):
    """Invert :func:`indices_of_purity`.

    ``lambda_j = 1/d - P_(j-1)/j + sum_{i=j}^{d-1} P_(i) / (i (i+1))`` with
    ``P_(0) = 0``.
    """
    ips = check_ips(p)
    d = ips.shape[-1] + 1
    # equivalent telescoped form: lambda_d = (1 - P_(d-1))/d and
    # lambda_j - lambda_{j+1} = (P_(j) - P_(j-1))/j; every term is non-negative
    zeros = np.zeros(ips.shape[:-1] + (1,))
    prev = np.concatenate([zeros, ips[..., :-1]], axis=-1)
    gaps = (ips - prev) / np.arange(1, d, dtype=float)
    tail = np.flip(np.cumsum(np.flip(gaps, axis=-1), axis=-1), axis=-1)
    base = (1.0 - ips[..., -1:]) / d
    lam = np.concatenate([tail, zeros], axis=-1) + base
    if np.any(lam < -negative_tol):
        raise NumericalError(f"reconstructed eigenvalue {lam.min():.3e} is negative")
    lam = np.clip(lam, 0.0, None)
    return lam / lam.sum(axis=-1, keepdims=True)


def purity_gamma(s):
    """Purity ``Tr(rho^2) = sum lambda_i^2``."""
    lam = check_spectra(s)
    return _scalar_or_array(np.sum(lam * lam, axis=-1))


def _global_purity_unchecked(lam):
    d = lam.shape[-1]
    centred = lam - 1.0 / d
    # d*gamma - 1 == d * sum (lambda - 1/d)^2; the centred sum avoids cancellation
    # near the mixed state, the gamma form keeps pure states exactly at 1
    p2_centred = d * np.sum(centred * centred, axis=-1) / (d - 1)
    p2_gamma = (d * np.sum(lam * lam, axis=-1) - 1.0) / (d - 1)
    p2 = np.where(p2_gamma > 0.25, p2_gamma, p2_centred)
    return np.sqrt(np.clip(p2, 0.0, 1.0))


def _purity_complement_unchecked(lam):
    # 1 - gamma = sum_i lambda_i * (sum of the others); every term is a sum of
    # non-negative numbers, so 1 - P_d keeps full relative accuracy near purity
    d = lam.shape[-1]
    zero = np.zeros(lam.shape[:-1] + (1,))
    left = np.concatenate([zero, np.cumsum(lam[..., :-1], axis=-1)], axis=-1)
    right = np.concatenate([np.cumsum(lam[..., :0:-1], axis=-1)[..., ::-1], zero], axis=-1)
    one_minus_p2 = d / (d - 1) * np.sum(lam * (left + right), axis=-1)
    p = _global_purity_unchecked(lam)
    return np.clip(one_minus_p2, 0.0, 1.0) / (1.0 + p)


def _set_from_spectrum_unchecked(lam):
    p = _global_purity_unchecked(lam)
    q = _purity_complement_unchecked(lam)
    with np.errstate(divide="ignore"):
        near_pure = 2.0 / (np.log1p(p) - np.log(q))
        generic = 1.0 / np.arctanh(p)
    return np.where(p > 0.5, near_pure, generic)


def set_from_spectrum(s):
    """SET of a spectrum, accurate even when ``1 - P_d`` underflows ``eps``.

    Near purity the ratio ``(1 + P) / (1 - P)`` is formed from ``1 - P_d``
    computed directly from the eigenvalues instead of by subtraction.
    """
    return _scalar_or_array(_set_from_spectrum_unchecked(check_spectra(s)))


def global_purity(s):
    """Degree of purity ``P_d = sqrt((d gamma - 1) / (d - 1))``, in [0, 1]."""
    return _scalar_or_array(_global_purity_unchecked(check_spectra(s)))


def global_purity_from_ips(p):
    """Degree of purity from the indices: ``sqrt(d/(d-1) sum P_(k)^2 / (k(k+1)))``."""
    ips = check_ips(p)
    d = ips.shape[-1] + 1
    p2 = d / (d - 1) * np.sum(ips * ips * ip_weights(d), axis=-1)
    return _scalar_or_array(np.sqrt(np.clip(p2, 0.0, 1.0)))


def _check_unit_interval(x, name, *, slack=tol.IDENTITY_TOL):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -slack) or np.any(arr > 1.0 + slack):
        raise ValidationError(f"{name} must lie in [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def set_temperature(p_d):
    """Statistical effective temperature ``tau = 2 / ln((1 + P) / (1 - P))``.

    Returns ``inf`` at ``P = 0`` (maximally mixed) and ``0`` at ``P = 1``.
    """
    p = _check_unit_interval(p_d, "degree of purity")
    with np.errstate(divide="ignore"):
        tau = 1.0 / np.arctanh(p)
    return _scalar_or_array(tau)


def inverse_set(p_d):
    """Inverse SET ``beta = (1/2) ln((1 + P) / (1 - P))``; ``inf`` at the pure limit."""
    p = _check_unit_interval(p_d, "degree of purity")
    with np.errstate(divide="ignore"):
        beta = np.arctanh(p)
    return _scalar_or_array(beta)


def purity_from_tau(tau):
    """Degree of purity for a given SET, ``tanh(1 / tau)``."""
    t = np.asarray(tau, dtype=float)
    if np.any(t < 0) or np.any(np.isnan(t)):
        raise ValidationError("tau must be non-negative")
    with np.errstate(divide="ignore"):
        return _scalar_or_array(np.tanh(1.0 / t))


def purity_complement_from_tau(tau):
    """``1 - tanh(1/tau)`` evaluated without cancellation for small tau."""
    t = np.asarray(tau, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        out = 2.0 / (1.0 + np.exp(2.0 / t))
    return _scalar_or_array(out)


def von_neumann_entropy(s):
    """Shannon entropy of the spectrum, ``-sum lambda ln lambda`` (0 ln 0 = 0)."""
    lam = check_spectra(s)
    return _scalar_or_array(np.sum(entr(lam), axis=-1))


def entropy_from_ips(p):
    """Entropy written directly in terms of the indices of purity."""
    return _scalar_or_array(np.sum(entr(spectrum_from_ips(p)), axis=-1))


def pairwise_order_parameter(s):
    """``P_p = max(0, lambda_1 - sum_{i>=2} lambda_i) = max(0, 2 lambda_1 - 1)``."""
    lam = check_spectra(s)
    return _scalar_or_array(np.maximum(0.0, 2.0 * lam[..., 0] - 1.0))


def bipartite_entropy(p_p):
    """Binary entropy of ``(1 + P_p) / 2``; lies in [0, ln 2]."""
    p = _check_unit_interval(p_p, "pairwise order parameter")
    return _scalar_or_array(entr((1.0 + p) / 2.0) + entr((1.0 - p) / 2.0))


def degeneracy_plateau(d, g):
    """Zero-temperature SET of a Gibbs state with a ``g``-fold ground level.

    The state is the maximally mixed projector of rank ``g``, whose degree of
    purity is ``sqrt((d/g - 1) / (d - 1))``.
    """
    if int(d) != d or int(g) != g:
        raise ValidationError("d and g must be integers")
    d, g = int(d), int(g)
    if d < 2:
        raise ValidationError("d must be at least 2")
    if not 1 <= g <= d:
        raise ValidationError(f"degeneracy g={g} outside [1, {d}]")
    if g == d:
        return math.inf
    if g == 1:
        return 0.0
    return 1.0 / math.atanh(math.sqrt((d / g - 1.0) / (d - 1.0)))


def summarize_spectrum(s):
    """Bundle every scalar descriptor of one spectrum into a SpectralSummary."""
    lam = check_spectra(s)
    if lam.ndim != 1:
        raise ValidationError("summarize_spectrum takes a single spectrum")
    p_d = float(_global_purity_unchecked(lam))
    p_p = float(max(0.0, 2.0 * lam[0] - 1.0))
    tau = float(_set_from_spectrum_unchecked(lam))
    return SpectralSummary(
        gamma=float(np.sum(lam * lam)),
        p_global=p_d,
        p_pairwise=p_p,
        tau=tau,
        beta=math.inf if tau == 0 else 1.0 / tau,
        entropy=float(np.sum(entr(lam))),
        bipartite_entropy=float(bipartite_entropy(p_p)),
    )
