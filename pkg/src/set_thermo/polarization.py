"""Characteristic decomposition of 3x3 polarization density matrices.

Any qutrit state splits as ``P1 rho_p + (P2 - P1) rho_m + (1 - P2) I/3`` where
``P1, P2`` are its indices of purity, ``rho_p`` projects on the leading
eigenvector and ``rho_m`` is half the projector on the leading two. The state
is *regular* when ``Re rho_m`` has rank 2 and *nonregular* when it has rank 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _tolerances as tol
from .errors import ValidationError
from .states import DensityMatrix, eigendecompose

RANK_THRESHOLD = tol.RANK_TOL
BORDERLINE_FACTOR = 10.0


@dataclass(frozen=True)
class CharacteristicDecomposition:
    pure_part: np.ndarray
    discriminating_part: np.ndarray
    unpolarized_part: np.ndarray
    weights: tuple
    discriminating_real_rank: int

    def reconstruct(self):
        w1, w2, w3 = self.weights
        return w1 * self.pure_part + w2 * self.discriminating_part + w3 * self.unpolarized_part


def _real_rank(m, threshold):
    sv = np.linalg.svd(np.real(m), compute_uv=False)
    return int(np.sum(sv > threshold)), sv


def characteristic_decomposition(rho3, *, rank_threshold=RANK_THRESHOLD):
    """Split a qutrit density matrix into pure, discriminating and unpolarized parts.

    Examples
    --------
    >>> dec = characteristic_decomposition(np.diag([0.5, 0.3, 0.2]))
    >>> np.round(dec.weights, 12).tolist()
    [0.2, 0.2, 0.6]
    """
    m = rho3.matrix if isinstance(rho3, DensityMatrix) else DensityMatrix(rho3).matrix
    if m.shape != (3, 3):
        raise ValidationError(f"characteristic decomposition needs a 3x3 matrix, got {m.shape}")
    lam, u = eigendecompose(m)
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    p1 = lam[0] - lam[1]
    p2 = lam[0] + lam[1] - 2.0 * lam[2]
    pure = np.outer(u[:, 0], u[:, 0].conj())
    # half the projector on the leading pair; independent of the basis chosen
    # inside that plane, so a degenerate top pair is harmless
    disc = 0.5 * (pure + np.outer(u[:, 1], u[:, 1].conj()))
    unpol = np.eye(3, dtype=complex) / 3.0
    rank, _ = _real_rank(disc, rank_threshold)
    return CharacteristicDecomposition(
        pure_part=pure,
        discriminating_part=disc,
        unpolarized_part=unpol,
        weights=(float(p1), float(p2 - p1), float(1.0 - p2)),
        discriminating_real_rank=rank,
    )


@dataclass(frozen=True)
class RegularityReport:
    label: str
    m: int
    weights: tuple
    singular_values: tuple
    borderline: bool
    has_discriminating_component: bool

    def as_dict(self):
        return {
            "label": self.label,
            "m": self.m,
            "weights": list(self.weights),
            "singular_values": list(self.singular_values),
            "borderline": self.borderline,
            "has_discriminating_component": self.has_discriminating_component,
        }


def classify_regularity(dec, *, rank_threshold=RANK_THRESHOLD, weight_tol=tol.IDENTITY_TOL):
    """Regular iff ``rank(Re rho_m) == 2``.

    A vanishing discriminating weight (``P1 == P2``) leaves only the pure and
    unpolarized parts; such states are reported as regular with no
    discriminating component. Singular values within a factor
    ``BORDERLINE_FACTOR`` of the threshold set ``borderline``.
    """
    m, sv = _real_rank(dec.discriminating_part, rank_threshold)
    borderline = bool(np.any((sv > rank_threshold / BORDERLINE_FACTOR)
                             & (sv < rank_threshold * BORDERLINE_FACTOR)))
    has_disc = dec.weights[1] > weight_tol
    label = "nonregular" if has_disc and m == 3 else "regular"
    return RegularityReport(
        label=label,
        m=m,
        weights=tuple(dec.weights),
        singular_values=tuple(float(x) for x in sv),
        borderline=borderline,
        has_discriminating_component=bool(has_disc),
    )


def regularity_report(rho3):
    """JSON-ready classification report for one qutrit state."""
    return classify_regularity(characteristic_decomposition(rho3)).as_dict()


def two_eigenstate_example(spectrum=(0.5, 0.3, 0.2)):
    """State with leading eigenvectors ``(1, i, 0)/sqrt(2)`` and ``(0, 0, 1)``.

    Its discriminating part has ``Re rho_m = diag(1/4, 1/4, 1/2)`` (rank 3).
    """
    lam = np.asarray(spectrum, dtype=float)
    if lam.shape != (3,) or not (lam[0] > lam[1] > lam[2] >= 0):
        raise ValidationError("spectrum must be strictly descending with three entries")
    s = 1.0 / np.sqrt(2.0)
    basis = np.array([[s, 0.0, s], [1j * s, 0.0, -1j * s], [0.0, 1.0, 0.0]])
    return DensityMatrix((basis * lam) @ basis.conj().T)
