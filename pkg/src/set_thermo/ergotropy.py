"""Passive states, ergotropy, and the structured-state work bounds.

Hamiltonians are shifted so the ground energy is zero; ergotropy does not
change under that shift.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from . import _tolerances as tol
from .errors import DegenerateHamiltonianWarning, NumericalError, ValidationError
from .sampling import (
    SamplerConfig,
    chunk_plan,
    ginibre_states,
    haar_unitaries,
    make_rng,
    sample_uniform_entropy,
)
from .spectra import Spectrum, _global_purity_unchecked, set_temperature
from .states import DensityMatrix, Hamiltonian, check_hermitian

FIG5_QUBIT_ENERGIES = (0.0, 3.86)
FIG5_QUARTIT_ENERGIES = (0.0, 3.75, 7.32, 9.51)


@dataclass(frozen=True)
class ErgotropyRecord:
    lambda_max: float
    work: float
    entropy: float
    tau: float
    coherence: float


def _hamiltonian_matrix(h):
    return h.matrix if isinstance(h, Hamiltonian) else check_hermitian(h)


def energy_basis(h, *, degeneracy_tol=tol.IDENTITY_TOL):
    """Ascending energies (ground shifted to 0) and eigenvectors of ``h``.

    Coinciding levels keep ascending eigenvector-index order and trigger a
    DegenerateHamiltonianWarning.
    """
    m = _hamiltonian_matrix(h)
    if np.all(m == np.diag(np.diag(m))):
        e = np.real(np.diag(m)).astype(float)
        order = np.argsort(e, kind="stable")
        energies, vecs = e[order], np.eye(len(e), dtype=complex)[:, order]
    else:
        energies, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    if np.any(np.diff(energies) < degeneracy_tol):
        warnings.warn("Hamiltonian has degenerate levels; ties broken by eigenvector index",
                      DegenerateHamiltonianWarning, stacklevel=3)
    return energies - energies[0], vecs


def _state_matrix(rho):
    return rho.matrix if isinstance(rho, DensityMatrix) else DensityMatrix(rho).matrix


def _descending_eigenvalues(m):
    w = np.clip(np.linalg.eigvalsh(0.5 * (m + m.conj().T)), 0.0, None)
    return w[::-1] / w.sum()


def passive_state(rho, h):
    """Minimal-energy state with the spectrum of ``rho``.

    The largest eigenvalue sits on the ground level, the next on the first
    excited level, and so on.

    Examples
    --------
    >>> import numpy as np
    >>> passive_state(np.diag([0.3, 0.7]), Hamiltonian.from_energies([0, 1])).matrix.real
    array([[0.7, 0. ],
           [0. , 0.3]])
    """
    m = _state_matrix(rho)
    _, vecs = energy_basis(h)
    lam = _descending_eigenvalues(m)
    return DensityMatrix((vecs * lam) @ vecs.conj().T)


def ergotropy(rho, h, *, atol=tol.PSD_TOL):
    """Extractable work ``Tr(rho H) - Tr(rho_passive H)`` (non-negative)."""
    m = _state_matrix(rho)
    energies, vecs = energy_basis(h)
    hm = (vecs * energies) @ vecs.conj().T
    active = float(np.real(np.trace(m @ hm)))
    passive = float(_descending_eigenvalues(m) @ energies)
    w = active - passive
    if w < -atol:
        raise NumericalError(f"negative ergotropy {w:.3e}")
    return max(w, 0.0)


def max_ergotropy(spectrum, energies):
    """Ergotropy of the diagonal arrangement pairing the largest population with
    the highest level (the maximum over all states with this spectrum)."""
    lam = -np.sort(-np.asarray(spectrum, dtype=float), axis=-1)
    e = np.sort(np.asarray(energies, dtype=float))
    return np.sum(lam * (e[::-1] - e), axis=-1)


def anti_aligned_state(spectrum, h):
    """Diagonal state in the energy basis with populations reverse-sorted against
    the energies (largest population on the highest level)."""
    energies, vecs = energy_basis(h)
    lam = -np.sort(-np.asarray(spectrum, dtype=float))
    pops = lam[::-1]
    return DensityMatrix((vecs * pops) @ vecs.conj().T)


# -- structured states -----------------------------------------------------

def _check_lambda1(d, lambda1):
    if int(d) != d or d < 2:
        raise ValidationError("d must be an integer >= 2")
    lo = 1.0 / d
    if not (lo - tol.IDENTITY_TOL <= lambda1 <= 1.0 + tol.IDENTITY_TOL):
        raise ValidationError(f"lambda1={lambda1} outside [1/{d}, 1]")
    return min(max(float(lambda1), lo), 1.0)


def structured_spectrum(d, lambda1):
    """``(lambda1, lambda_e, ..., lambda_e)`` with ``lambda_e = (1 - lambda1)/(d - 1)``."""
    lam1 = _check_lambda1(d, lambda1)
    lam_e = (1.0 - lam1) / (d - 1)
    return Spectrum(np.array([lam1] + [lam_e] * (int(d) - 1)))


def structured_state(d, lambda1, h):
    """Structured state: ``lambda1`` on the top level, ``lambda_e`` elsewhere."""
    return anti_aligned_state(structured_spectrum(d, lambda1).values, h)


def structured_purity_index(d, lambda1):
    """Common value ``P_(e) = (d lambda1 - 1)/(d - 1)`` of all the indices of purity."""
    lam1 = _check_lambda1(d, lambda1)
    return (d * lam1 - 1.0) / (d - 1.0)


def structured_ergotropy(d, lambda1, eps_top):
    """Ergotropy of the structured state, ``eps_top (d lambda1 - 1)/(d - 1)``.

    Only the top energy matters (ground energy taken as 0).
    """
    if not eps_top > 0:
        raise ValidationError("eps_top must be positive")
    return eps_top * structured_purity_index(d, lambda1)


def _check_pe(p_e):
    p = np.asarray(p_e, dtype=float)
    if np.any(~np.isfinite(p)) or np.any(p < -tol.IDENTITY_TOL) or np.any(p > 1 + tol.IDENTITY_TOL):
        raise ValidationError("p_e must lie in [0, 1]")
    return np.clip(p, 0.0, 1.0)


def structured_entropy(d, p_e):
    """Entropy of the structured spectrum as a function of ``P_(e)``.

    For ``d = 4`` this is ``-(1/4)[(1+3p) ln((1+3p)/4) + 3(1-p) ln((1-p)/4)]``.
    """
    p = _check_pe(p_e)
    lam1 = (1.0 + (d - 1) * p) / d
    lam_e = (1.0 - p) / d
    s = entr(lam1) + (d - 1) * entr(lam_e)
    return float(s) if np.ndim(s) == 0 else s


def structured_set(d, p_e):
    """SET of the structured spectrum: ``2 / ln((1 + p)/(1 - p))``.

    For every ``d`` the degree of purity of the structured spectrum equals
    ``P_(e)`` exactly, so the generic SET formula applies unchanged.
    """
    return set_temperature(_check_pe(p_e))


def structured_lambda1_for_entropy(d, entropy, *, iterations=80):
    """Invert :func:`structured_entropy` for ``lambda1`` (vectorised bisection)."""
    s = np.asarray(entropy, dtype=float)
    lo = np.full(s.shape, 1.0 / d)
    hi = np.ones(s.shape)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        s_mid = entr(mid) + (d - 1) * entr((1.0 - mid) / (d - 1))
        # entropy decreases with lambda1
        above = s_mid > s
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out = 0.5 * (lo + hi)
    return float(out) if out.ndim == 0 else out


def structured_bound_at_entropy(d, entropy, eps_top):
    """Structured-state ergotropy at the given entropy."""
    lam1 = structured_lambda1_for_entropy(d, entropy)
    return eps_top * (d * np.asarray(lam1) - 1.0) / (d - 1.0)


def structured_bound_at_tau(tau, eps_top):
    """Structured-state ergotropy at the given SET (``eps_top * tanh(1/tau)``)."""
    t = np.asarray(tau, dtype=float)
    with np.errstate(divide="ignore"):
        return eps_top * np.tanh(1.0 / t)


def structured_curve(d, eps_top, points=201):
    """Rows ``(lambda1, work, entropy, tau)`` along the structured family."""
    lam1 = np.linspace(1.0 / d, 1.0, points)
    p_e = (d * lam1 - 1.0) / (d - 1.0)
    return np.column_stack([lam1, eps_top * p_e, structured_entropy(d, p_e),
                            structured_set(d, np.clip(p_e, 0.0, 1.0))])


# -- scatter data ----------------------------------------------------------

@dataclass(frozen=True)
class ErgotropyScatter:
    """Columnar scatter data; ``source`` is ``"ginibre"`` or ``"uniform_entropy"``."""

    lambda_max: np.ndarray
    work: np.ndarray
    entropy: np.ndarray
    tau: np.ndarray
    coherence: np.ndarray
    source: np.ndarray

    def __len__(self):
        return self.work.shape[0]

    def records(self):
        for row in zip(self.lambda_max, self.work, self.entropy, self.tau, self.coherence):
            yield ErgotropyRecord(*map(float, row))

    def select(self, mask):
        return ErgotropyScatter(*(getattr(self, f)[mask] for f in
                                  ("lambda_max", "work", "entropy", "tau", "coherence", "source")))


def _diagonal_energies(h):
    m = _hamiltonian_matrix(h)
    if np.any(m != np.diag(np.diag(m))):
        raise ValidationError("scatter generation needs a diagonal Hamiltonian")
    e = np.real(np.diag(m)).astype(float)
    if np.any(np.diff(np.sort(e)) < tol.IDENTITY_TOL):
        raise ValidationError("scatter generation needs a non-degenerate Hamiltonian")
    return e - e.min()


def _records_from_populations(lam, pops, energies):
    # lam: descending spectra (n, d); pops: energy-basis populations (n, d)
    passive = lam @ np.sort(energies)
    work = pops @ energies - passive
    if np.any(work < -tol.PSD_TOL):
        raise NumericalError(f"negative ergotropy {work.min():.3e}")
    s = np.sum(entr(lam), axis=1)
    coherence = np.sum(entr(np.clip(pops, 0.0, None)), axis=1) - s
    if np.any(coherence < -tol.PSD_TOL):
        raise NumericalError(f"negative coherence {coherence.min():.3e}")
    tau = np.atleast_1d(set_temperature(_global_purity_unchecked(lam)))
    return lam[:, 0].copy(), np.maximum(work, 0.0), s, tau, np.maximum(coherence, 0.0)


def ergotropy_records(states, h):
    """Scatter columns for a batch of density matrices written in the energy
    basis of a diagonal ``h``. ``states`` has shape ``(n, d, d)``."""
    energies = _diagonal_energies(h)
    rho = np.asarray(states, dtype=complex)
    if rho.ndim == 2:
        rho = rho[None]
    w = np.linalg.eigvalsh(0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2))))
    w = np.clip(w[:, ::-1], 0.0, None)
    lam = w / w.sum(axis=1, keepdims=True)
    pops = np.real(np.diagonal(rho, axis1=-2, axis2=-1))
    cols = _records_from_populations(lam, pops, energies)
    return ErgotropyScatter(*cols, source=np.full(lam.shape[0], "input"))


def _rotated_columns(lam, energies, seed_seq):
    # rho = Q diag(lam) Q^dagger, populations p_i = sum_k |Q_ik|^2 lam_k
    q = haar_unitaries(lam.shape[1], lam.shape[0], make_rng(seed_seq))
    pops = np.einsum("nik,nk->ni", np.abs(q) ** 2, lam)
    return _records_from_populations(lam, pops, energies)


def _ginibre_spectra(d, count, seed_seq):
    rho = ginibre_states(d, count, make_rng(seed_seq))
    w = np.clip(np.linalg.eigvalsh(rho)[:, ::-1], 0.0, None)
    return w / w.sum(axis=1, keepdims=True)


def ergotropy_scatter(h, n, seed, *, ginibre_fraction=0.5):
    """Random states and their ``(lambda_max, W, S, tau, C)`` for a diagonal ``h``.

    Spectra come from Ginibre matrices (fraction ``ginibre_fraction``) and from
    the uniform-entropy sampler. Each spectrum is placed on the energy basis
    and rotated by its own Haar unitary ``Q``. Output order: Ginibre block then
    uniform-entropy block, each in sample order.
    """
    energies = _diagonal_energies(h)
    d = energies.size
    if not 0.0 <= ginibre_fraction <= 1.0:
        raise ValidationError("ginibre_fraction must lie in [0, 1]")
    n_gin = int(round(n * ginibre_fraction))
    n_uni = n - n_gin
    ss_gin, ss_uni, ss_rot = np.random.SeedSequence(int(seed)).spawn(3)

    blocks, sources = [], []
    if n_gin:
        plan = chunk_plan(n_gin, int(ss_gin.generate_state(1, np.uint64)[0]))
        blocks.append(np.concatenate([_ginibre_spectra(d, c, s) for c, s in plan]))
        sources.append(np.full(n_gin, "ginibre"))
    if n_uni:
        cfg = SamplerConfig(d=d, n=n_uni, seed=int(ss_uni.generate_state(1, np.uint64)[0]),
                            method="uniform_entropy")
        uni = sample_uniform_entropy(cfg)
        blocks.append(uni)
        sources.append(np.full(uni.shape[0], "uniform_entropy"))
    lam = np.concatenate(blocks)
    source = np.concatenate(sources)

    plan = chunk_plan(lam.shape[0], int(ss_rot.generate_state(1, np.uint64)[0]))
    cols, start = [], 0
    for count, s in plan:
        cols.append(_rotated_columns(lam[start:start + count], energies, s))
        start += count
    merged = [np.concatenate([c[i] for c in cols]) for i in range(5)]
    return ErgotropyScatter(*merged, source=source)


def above_structured_bound(scatter, d, eps_top, *, match="entropy", atol=1e-9):
    """Mask of records whose work exceeds the structured bound by more than ``atol``.

    ``match="entropy"`` compares at equal entropy, ``"tau"`` at equal SET.
    """
    if match == "entropy" and d == 2:
        # binary entropy is injective on [1/2, 1]: equal entropy means equal
        # lambda_max, which avoids inverting S where it is flat
        bound = eps_top * (2.0 * scatter.lambda_max - 1.0)
    elif match == "entropy":
        bound = structured_bound_at_entropy(d, scatter.entropy, eps_top)
    elif match == "tau":
        bound = structured_bound_at_tau(scatter.tau, eps_top)
    else:
        raise ValidationError("match must be 'entropy' or 'tau'")
    return scatter.work > bound + atol
