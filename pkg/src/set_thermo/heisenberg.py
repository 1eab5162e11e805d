"""Open isotropic Heisenberg chains ``sum_i sigma_i . sigma_{i+1}``.

One dense diagonalization per length (cached); Gibbs spectra at any
temperature then come straight from the energy list.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy.special import entr

from . import _tolerances as tol
from ._parallel import ordered_map
from .errors import ValidationError
from .spectra import _set_from_spectrum_unchecked, degeneracy_plateau
from .states import Hamiltonian

MIN_LENGTH, MAX_LENGTH = 2, 9
PLATEAU_TEMPERATURE = 1e-4
SLOPE_GRID = np.linspace(10.0, 100.0, 91)

# sigma^x sigma^x + sigma^y sigma^y + sigma^z sigma^z on two sites (real)
_BOND = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 2.0, 0.0],
    [0.0, 2.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])


def _check_length(L):
    if int(L) != L or not MIN_LENGTH <= L <= MAX_LENGTH:
        raise ValidationError(f"chain length must be an integer in [{MIN_LENGTH}, {MAX_LENGTH}]")
    return int(L)


@lru_cache(maxsize=None)
def _chain_matrix(L):
    d = 2 ** L
    h = np.zeros((d, d))
    for i in range(L - 1):
        h += np.kron(np.kron(np.eye(2 ** i), _BOND), np.eye(2 ** (L - i - 2)))
    h.setflags(write=False)
    return h


def chain_hamiltonian(L):
    """Real symmetric ``2^L x 2^L`` Hamiltonian in the computational basis."""
    return Hamiltonian(_chain_matrix(_check_length(L)))


@lru_cache(maxsize=None)
def _energies(L):
    e = np.linalg.eigvalsh(_chain_matrix(L))
    e.setflags(write=False)
    return e


def chain_energies(L):
    """Ascending eigenvalues of :func:`chain_hamiltonian`."""
    return _energies(_check_length(L))


def ground_degeneracy(L, *, cluster_tol=tol.DEGENERACY_TOL):
    """Number of levels within ``cluster_tol`` of the ground energy."""
    e = chain_energies(L)
    return int(np.sum(e <= e[0] + cluster_tol))


def variance_check(L):
    """``(Tr(H^2) / 2^L, 3 (L - 1))``: infinite-temperature energy variance."""
    h = _chain_matrix(_check_length(L))
    numeric = float(np.sum(h * h)) / h.shape[0]
    return numeric, 3.0 * (L - 1)


def _gibbs_row(energies, temperature):
    w = np.exp(-(energies - energies[0]) / temperature)
    p = w / w.sum()
    p = -np.sort(-p)
    tau = float(_set_from_spectrum_unchecked(p))
    return tau, float(np.sum(entr(p)))


def tau_vs_temperature(L, t_grid):
    """Rows ``(T, tau, entropy)`` of the chain's Gibbs state over ``t_grid``."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ValidationError("t_grid must be positive and strictly ascending")
    e = chain_energies(L)
    rows = ordered_map(lambda temp: _gibbs_row(e, temp), t)
    return np.column_stack([t, np.array(rows).reshape(-1, 2)])


@dataclass(frozen=True)
class Plateau:
    """Low-temperature SET; both values are None when the ground level is unique."""

    numeric: float | None
    theory: float | None
    degeneracy: int


def plateau(L, *, temperature=PLATEAU_TEMPERATURE):
    g = ground_degeneracy(L)
    if g == 1:
        return Plateau(None, None, g)
    d = 2 ** _check_length(L)
    numeric, _ = _gibbs_row(chain_energies(L), temperature)
    return Plateau(numeric, degeneracy_plateau(d, g), g)


def slope_theory(L):
    """High-temperature slope ``sqrt((2^L - 1) / (3 (L - 1)))``."""
    L = _check_length(L)
    return math.sqrt((2 ** L - 1) / (3.0 * (L - 1)))


def slope_printed_formula(L):
    """Alternative reading ``sqrt((2^L - 1) / 3^(L - 1))``, kept for comparison."""
    L = _check_length(L)
    return math.sqrt((2 ** L - 1) / 3.0 ** (L - 1))


def high_t_slope(L, t_grid=SLOPE_GRID):
    """Least-squares slope of tau against T through the origin, and its theory value.

    From ``gamma ~ (1 + Var(H) / T^2) / d`` with ``Var(H) = 3 (L - 1)``, the
    degree of purity behaves as ``sqrt(Var(H) / (d - 1)) / T``, so
    ``tau ~ T sqrt((d - 1) / Var(H))``.
    """
    rows = tau_vs_temperature(L, t_grid)
    t, tau = rows[:, 0], rows[:, 1]
    return float(t @ tau / (t @ t)), slope_theory(L)


@dataclass(frozen=True)
class ChainDiagnostics:
    length: int
    dimension: int
    ground_energy: float
    ground_degeneracy: int
    variance: float
    variance_theory: float
    slope_fit: float
    slope_theory: float
    plateau_numeric: float | None
    plateau_theory: float | None

    def as_dict(self):
        return asdict(self)


def diagnostics(L):
    L = _check_length(L)
    var, var_theory = variance_check(L)
    fit, theory = high_t_slope(L)
    pl = plateau(L)
    return ChainDiagnostics(
        length=L,
        dimension=2 ** L,
        ground_energy=float(chain_energies(L)[0]),
        ground_degeneracy=pl.degeneracy,
        variance=var,
        variance_theory=var_theory,
        slope_fit=fit,
        slope_theory=theory,
        plateau_numeric=pl.numeric,
        plateau_theory=pl.theory,
    )
