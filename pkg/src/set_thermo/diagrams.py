"""Geometry of the entropy-SET plane.

The reachable region of ``(tau_d, S_d)`` is bounded by one-parameter curves.
Each picks a block ``1 <= i <= j <= d-1`` of indices of purity: indices below
the block are 0, those above are 1, and the block itself sweeps a common value
``t`` from 0 to 1. There are ``d (d - 1) / 2`` blocks. Setting a whole prefix to
0 and the rest to 1 gives the ``d - 2`` cusp points where curves meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
from scipy.special import entr

from ._parallel import ordered_map
from .errors import ValidationError
from .spectra import (
    IndicesOfPurity,
    _set_from_spectrum_unchecked,
    global_purity_from_ips,
    ip_weights,
    purity_complement_from_tau,
    set_temperature,
    spectrum_from_ips,
)
from .states import gibbs_spectrum

DEFAULT_RESOLUTION = 512
DEFAULT_TAU_MAX = 1e3
ENVELOPE_TOL = 1e-6
DIVERGENCE_MARGIN = 1e-12


def _check_dim(d, minimum=2):
    if int(d) != d or d < minimum:
        raise ValidationError(f"dimension must be an integer >= {minimum}")
    return int(d)


def boundary_blocks(d):
    """Blocks ``(i, j)`` in lexicographic order."""
    d = _check_dim(d)
    return [(i, j) for i in range(1, d) for j in range(i, d)]


def block_ips(d, block, t):
    """Indices of purity on block curve ``(i, j)`` at parameter(s) ``t``."""
    i, j = block
    t = np.asarray(t, dtype=float)
    k = np.arange(1, d)
    ips = np.where(k < i, 0.0, np.where(k > j, 1.0, t[..., None]))
    return ips


@dataclass(frozen=True)
class DiagramCurve:
    """One boundary curve, with points sorted by ascending tau.

    ``tau`` is truncated at ``tau_max`` where the analytic value is infinite;
    ``endpoints`` keeps the exact ``(tau, entropy)`` limits at both ends.
    """

    label: tuple
    t: np.ndarray
    tau: np.ndarray
    entropy: np.ndarray
    endpoints: tuple

    @property
    def points(self):
        return np.column_stack([self.tau, self.entropy])

    @property
    def name(self):
        return f"block_{self.label[0]}_{self.label[1]}"


def _cosine_grid(resolution):
    return 0.5 * (1.0 - np.cos(np.linspace(0.0, math.pi, resolution)))


def _curve(d, block, resolution, tau_max):
    t = _cosine_grid(resolution)
    lam = spectrum_from_ips(block_ips(d, block, t))
    tau = _set_from_spectrum_unchecked(lam)
    entropy = np.sum(entr(lam), axis=-1)
    # t runs from the mixed end to the pure end, i.e. tau descends
    order = np.arange(resolution)[::-1]
    t, tau, entropy = t[order], tau[order], entropy[order]
    endpoints = ((float(tau[0]), float(entropy[0])), (float(tau[-1]), float(entropy[-1])))
    return DiagramCurve(block, t, np.minimum(tau, tau_max), entropy, endpoints)


def boundary_curves(d, resolution=DEFAULT_RESOLUTION, *, tau_max=DEFAULT_TAU_MAX):
    """All ``d (d - 1) / 2`` boundary curves, in block order."""
    d = _check_dim(d)
    if int(resolution) != resolution or resolution < 2:
        raise ValidationError("resolution must be an integer >= 2")
    if not tau_max > 0:
        raise ValidationError("tau_max must be positive")
    return ordered_map(lambda b: _curve(d, b, int(resolution), float(tau_max)), boundary_blocks(d))


@dataclass(frozen=True)
class CuspPoint:
    k: int
    ips: IndicesOfPurity
    tau: float
    entropy: float

    @property
    def spectrum(self):
        return spectrum_from_ips(self.ips.values)


def cusp_points(d):
    """Cusp ``k`` (``1 <= k <= d-2``): first ``k`` indices 0, the rest 1.

    Its spectrum is uniform on ``k + 1`` levels, so ``S = ln(k + 1)`` and
    ``P_d = sqrt((d/(k+1) - 1)/(d - 1))``.
    """
    d = _check_dim(d)
    out = []
    for k in range(1, d - 1):
        ips = np.array([0.0] * k + [1.0] * (d - 1 - k))
        p_d = math.sqrt((d / (k + 1) - 1.0) / (d - 1.0))
        out.append(CuspPoint(k, IndicesOfPurity(ips), 1.0 / math.atanh(p_d), math.log(k + 1)))
    return out


# -- envelope --------------------------------------------------------------

def _block_entropy_at_purity(d, block, p):
    # solve (d-1)/d P^2 = t^2 W_block + R_above for t; NaN where no t in [0, 1]
    i, j = block
    w = ip_weights(d)
    w_block = w[i - 1:j].sum()
    r_above = w[j:].sum()
    t2 = ((d - 1.0) / d * p * p - r_above) / w_block
    valid = (t2 >= -1e-15) & (t2 <= 1.0 + 1e-15)
    t = np.sqrt(np.clip(t2, 0.0, 1.0))
    lam = spectrum_from_ips(block_ips(d, block, t))
    s = np.sum(entr(lam), axis=-1)
    return np.where(valid, s, np.nan)


def envelope_bounds(d, tau, *, blocks=None):
    """Lower and upper entropy of the boundary curves at the given SET values.

    Each curve is solved exactly for its parameter at the requested tau, so no
    interpolation grid is involved and every ``tau`` in ``[0, inf]`` is covered.
    """
    d = _check_dim(d)
    tau = np.asarray(tau, dtype=float)
    if np.any(np.isnan(tau)) or np.any(tau < 0):
        raise ValidationError("tau must be non-negative")
    with np.errstate(divide="ignore"):
        p = np.tanh(1.0 / tau)
    blocks = boundary_blocks(d) if blocks is None else list(blocks)
    s = np.stack([_block_entropy_at_purity(d, b, np.atleast_1d(p)) for b in blocks])
    lower, upper = np.nanmin(s, axis=0), np.nanmax(s, axis=0)
    if tau.ndim == 0:
        return float(lower[0]), float(upper[0])
    return lower, upper


def envelope_contains(d, tau, entropy, curves=None, *, tol=ENVELOPE_TOL):
    """Whether ``(tau, entropy)`` lies between the lower and upper envelopes.

    ``curves`` restricts the envelope to the given DiagramCurve blocks; by
    default all boundary curves are used.
    """
    blocks = None if curves is None else [c.label for c in curves]
    lower, upper = envelope_bounds(d, tau, blocks=blocks)
    s = np.asarray(entropy, dtype=float)
    inside = (s >= np.asarray(lower) - tol) & (s <= np.asarray(upper) + tol)
    return bool(inside) if inside.ndim == 0 else inside


def upper_boundary_entropy(d, tau):
    """Entropy on the all-indices-equal curve at the given SET."""
    d = _check_dim(d)
    q = np.asarray(purity_complement_from_tau(tau), dtype=float)
    lam_e = q / d
    lam_1 = 1.0 - (d - 1) * lam_e
    out = entr(lam_1) + (d - 1) * entr(lam_e)
    return float(out) if out.ndim == 0 else out


def upper_boundary_slope(d, tau):
    """``dS/dtau`` along the upper boundary, in closed form.

    ``dS/dP = (d-1)/d ln(lambda_e/lambda_1)`` and ``dP/dtau = -(1 - P^2)/tau^2``.
    """
    d = _check_dim(d)
    tau = np.asarray(tau, dtype=float)
    q = np.asarray(purity_complement_from_tau(tau), dtype=float)
    lam_e = q / d
    lam_1 = 1.0 - (d - 1) * lam_e
    with np.errstate(divide="ignore", invalid="ignore"):
        ds_dp = (d - 1.0) / d * (np.log(lam_e) - np.log(lam_1))
        out = np.where(q > 0, -ds_dp * q * (2.0 - q) / (tau * tau), 0.0)
    return float(out) if out.ndim == 0 else out


# -- thermal curves --------------------------------------------------------

def thermal_entropy_curve(energies, t_grid):
    """Rows ``(T, S_th, tau)`` for the Gibbs states of the given energy levels."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ValidationError("t_grid must be positive and strictly ascending")
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size < 2:
        raise ValidationError("need at least two energy levels")
    lam = np.array([gibbs_spectrum(e, temp).probabilities.values for temp in t])
    s = np.sum(entr(lam), axis=-1)
    return np.column_stack([t, s, _set_from_spectrum_unchecked(lam)])


# -- third law -------------------------------------------------------------

@dataclass(frozen=True)
class ThirdLawSweep:
    """Rows sorted by ascending ``p_d``."""

    ips: np.ndarray
    p_d: np.ndarray
    beta: np.ndarray
    diverging: np.ndarray


def third_law_sweep(d, grid):
    """Inverse SET over every ordered IP tuple drawn from ``grid``.

    ``beta = atanh(P_d)``; rows with ``P_d > 1 - 1e-12`` are flagged as
    diverging and carry ``beta = inf``.
    """
    d = _check_dim(d)
    g = np.unique(np.asarray(grid, dtype=float))
    if g.size == 0 or g[0] < 0 or g[-1] > 1:
        raise ValidationError("grid values must lie in [0, 1]")
    ips = np.array(list(combinations_with_replacement(g, d - 1)), dtype=float)
    p_d = np.atleast_1d(global_purity_from_ips(ips))
    diverging = p_d > 1.0 - DIVERGENCE_MARGIN
    with np.errstate(divide="ignore"):
        beta = np.where(diverging, np.inf, np.arctanh(np.where(diverging, 0.0, p_d)))
    order = np.argsort(p_d, kind="stable")
    return ThirdLawSweep(ips[order], p_d[order], beta[order], diverging[order])


def approach_to_purity(ks=range(1, 13)):
    """``(P_d, beta)`` at ``P_d = 1 - 10^-k``."""
    k = np.asarray(list(ks), dtype=float)
    p = 1.0 - 10.0 ** (-k)
    return np.column_stack([p, np.arctanh(p)])


def telescoping_sum(d):
    """``sum_{k=1}^{d-1} 1/(k(k+1))`` in exact rational arithmetic."""
    d = _check_dim(d)
    return sum((Fraction(1, k * (k + 1)) for k in range(1, d)), Fraction(0))


def psa_points_tau_entropy(rows):
    """``(tau, entropy)`` columns from :func:`sampling.psa_curve` rows."""
    rows = np.asarray(rows, dtype=float)
    return rows[:, 1], rows[:, 2]


def ips_tau_entropy(ips):
    """``(tau, entropy)`` for a batch of index-of-purity vectors."""
    lam = spectrum_from_ips(ips)
    return np.atleast_1d(set_temperature(global_purity_from_ips(ips))), np.sum(entr(lam), axis=-1)
