"""Seeded random spectra, density matrices and unitaries, plus the PSA family.

Every sampler is a pure function of its configuration. Randomness comes from
numpy's counter-based Philox generator; a run of ``n`` samples is cut into
fixed-size chunks, chunk ``k`` drawing from ``SeedSequence(seed).spawn(...)[k]``.
The chunk layout depends only on ``n``, so the output is bit-identical
whatever ``SET_THERMO_THREADS`` is set to.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import entr

from ._parallel import ordered_map
from .errors import NumericalError, SamplingBudgetWarning, ValidationError
from .spectra import (
    Spectrum,
    _set_from_spectrum_unchecked,
    ip_weights,
    spectrum_from_ips,
)

CHUNK_SIZE = 8192
METHODS = ("ip_sphere", "ginibre", "uniform_entropy")


@dataclass(frozen=True)
class SamplerConfig:
    d: int
    n: int
    seed: int = 0
    method: str = "ip_sphere"

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValidationError("dimension d must be an integer >= 2")
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError("sample count n must be an integer >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; choose from {METHODS}")


def make_rng(seed):
    """Philox generator for an integer seed or a SeedSequence."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


def chunk_plan(n, seed, chunk_size=CHUNK_SIZE):
    """``(count, SeedSequence)`` pairs covering ``n`` samples."""
    counts = [chunk_size] * (n // chunk_size)
    if n % chunk_size:
        counts.append(n % chunk_size)
    children = np.random.SeedSequence(int(seed)).spawn(len(counts))
    return list(zip(counts, children))


# -- indices of purity on the sphere ---------------------------------------

def ip_scale(d):
    """``c_k`` with ``P_d = ||(c_k P_(k))_k||``."""
    return np.sqrt(d / (d - 1.0) * ip_weights(d))


def _ips_chunk(d, count, seed_seq, budget):
    rng = make_rng(seed_seq)
    c = ip_scale(d)
    out = np.empty((0, d - 1))
    attempts = 0
    while out.shape[0] < count:
        remaining = count - out.shape[0]
        batch = max(256, 4 * remaining)
        if attempts + batch > budget:
            batch = budget - attempts
            if batch <= 0:
                raise NumericalError(
                    f"IP-sphere sampler exhausted {budget} attempts for d={d}")
        attempts += batch
        direction = np.abs(rng.standard_normal((batch, d - 1)))
        norm = np.linalg.norm(direction, axis=1, keepdims=True)
        keep = norm[:, 0] > 0
        direction = direction[keep] / norm[keep]
        radius = rng.random((direction.shape[0], 1))
        ips = direction * radius / c
        ok = np.all(np.diff(ips, axis=1) >= 0.0, axis=1) & (ips[:, -1] <= 1.0)
        out = np.concatenate([out, ips[ok][:remaining]])
    return out


def sample_ips(cfg, *, budget_factor=10_000):
    """Indices of purity with uniformly random direction and radius.

    In rescaled coordinates ``x_k = c_k P_(k)`` the degree of purity is the
    Euclidean norm, so a direction is drawn uniformly on the positive orthant of
    the unit sphere and a radius ``P_d`` uniformly in (0, 1); draws breaking the
    ordering ``P_(1) <= ... <= P_(d-1) <= 1`` are rejected.

    Returns an array of shape ``(n, d - 1)``.
    """
    d = cfg.d
    plan = chunk_plan(cfg.n, cfg.seed)
    parts = ordered_map(lambda job: _ips_chunk(d, job[0], job[1], budget_factor * job[0]), plan)
    return np.concatenate(parts)


# -- Ginibre ---------------------------------------------------------------

def _complex_normal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def ginibre_states(d, n, rng):
    """``n`` states ``G G^dagger / Tr(G G^dagger)`` with complex Gaussian ``G``."""
    g = _complex_normal(rng, (n, d, d))
    rho = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.real(np.trace(rho, axis1=-2, axis2=-1))
    rho /= tr[:, None, None]
    return 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))


def sample_ginibre(cfg):
    """Ginibre (Hilbert-Schmidt) random density matrices, shape ``(n, d, d)``."""
    d = cfg.d
    plan = chunk_plan(cfg.n, cfg.seed)
    parts = ordered_map(lambda job: ginibre_states(d, job[0], make_rng(job[1])), plan)
    return np.concatenate(parts)


# -- uniform entropy -------------------------------------------------------

def _dirichlet_mixture(rng, d, size, low=0.02, high=20.0):
    # symmetric Dirichlet with a log-uniform concentration per draw
    alpha = np.exp(rng.uniform(math.log(low), math.log(high), size=(size, 1)))
    g = rng.gamma(np.broadcast_to(alpha, (size, d)))
    total = g.sum(axis=1)
    g = g[total > 0] / total[total > 0, None]
    return -np.sort(-g, axis=1)


def sample_uniform_entropy(cfg, *, bins=20, budget_factor=10_000, batch=4096):
    """Spectra whose entropies are spread evenly over ``[0, ln d]``.

    Stratified rejection: the entropy range is split into ``bins`` equal bins,
    each with a quota of ``n / bins`` samples, and proposals landing in a full
    bin are discarded. If ``budget_factor * n`` proposals do not fill every
    bin, a SamplingBudgetWarning is issued and the partial set is returned.

    Returns an array of shape ``(m, d)`` with ``m == n`` unless the budget ran out.
    """
    d, n = cfg.d, cfg.n
    rng = make_rng(cfg.seed)
    quota = np.full(bins, n // bins)
    quota[: n % bins] += 1
    filled = np.zeros(bins, dtype=int)
    accepted = []
    attempts, budget = 0, budget_factor * n
    s_max = math.log(d)
    while filled.sum() < n and attempts < budget:
        size = min(batch, budget - attempts)
        attempts += size
        lam = _dirichlet_mixture(rng, d, size)
        idx = np.minimum((np.sum(entr(lam), axis=1) / s_max * bins).astype(int), bins - 1)
        for row, b in zip(lam, idx):
            if filled[b] < quota[b]:
                filled[b] += 1
                accepted.append(row)
                if filled.sum() == n:
                    break
    if filled.sum() < n:
        warnings.warn(
            f"uniform-entropy sampler filled {filled.sum()}/{n} after {attempts} proposals",
            SamplingBudgetWarning, stacklevel=2)
    if not accepted:
        return np.empty((0, d))
    return np.asarray(accepted)


# -- Haar unitaries --------------------------------------------------------

def haar_unitaries(d, n, rng):
    """``n`` Haar-random ``d x d`` unitaries (QR of Ginibre with phase fix)."""
    z = _complex_normal(rng, (n, d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (diag / np.abs(diag))[:, None, :]


def haar_unitary(d, seed):
    """Single Haar-random unitary for an integer seed."""
    if int(d) != d or d < 2:
        raise ValidationError("d must be an integer >= 2")
    return haar_unitaries(int(d), 1, make_rng(seed))[0]


# -- parametric spectrum ansatz --------------------------------------------

@dataclass(frozen=True)
class PsaParams:
    """Boltzmann-like spectrum ``mu_i = exp(-zeta alpha_i) / Z(zeta)``."""

    alphas: tuple = field(default=(0.0, 1.0))
    zeta: float = 0.0

    def __post_init__(self):
        a = tuple(float(x) for x in self.alphas)
        if len(a) < 2 or not all(math.isfinite(x) for x in a):
            raise ValidationError("alphas must be at least two finite numbers")
        if not self.zeta >= 0:
            raise ValidationError("zeta must be non-negative")
        object.__setattr__(self, "alphas", a)

    @classmethod
    def default(cls, d, zeta=0.0):
        """Equally spaced levels ``alpha_i = i - 1``."""
        return cls(tuple(range(d)), zeta)


def _psa_values(alphas, zeta):
    a = np.asarray(alphas, dtype=float)
    if math.isinf(zeta):
        w = (a == a.min()).astype(float)
    else:
        w = np.exp(-zeta * (a - a.min()))
    return -np.sort(-w / w.sum())


def psa_spectrum(p):
    return Spectrum(_psa_values(p.alphas, p.zeta))


def psa_curve(p, zeta_grid):
    """``(zeta, tau, entropy)`` rows along the PSA path for the given alphas.

    The ``zeta`` stored on ``p`` is ignored; ``zeta_grid`` must be strictly
    increasing and non-negative.
    """
    z = np.asarray(zeta_grid, dtype=float)
    if z.ndim != 1 or z.size == 0 or np.any(z < 0) or np.any(np.diff(z) <= 0):
        raise ValidationError("zeta_grid must be non-negative and strictly increasing")
    lam = np.array([_psa_values(p.alphas, zeta) for zeta in z])
    tau = _set_from_spectrum_unchecked(lam)
    entropy = np.sum(entr(lam), axis=1)
    return np.column_stack([z, np.atleast_1d(tau), entropy])


def ips_to_spectra(ips):
    """Batch helper: indices of purity to descending spectra."""
    return spectrum_from_ips(ips)
