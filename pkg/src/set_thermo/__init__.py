"""Spectral thermodynamics of finite-dimensional density matrices.

The statistical effective temperature (SET) ``tau_d`` and the entropy of a
spectrum are computed from its indices of purity, then used to map the
entropy-SET plane, thermal curves of spin chains, ergotropy bounds and
qutrit polarization structure.
"""

from .errors import (
    DegenerateHamiltonianWarning,
    NumericalError,
    SamplingBudgetWarning,
    ValidationError,
)
from .spectra import (
    IndicesOfPurity,
    Spectrum,
    SpectralSummary,
    degeneracy_plateau,
    entropy_from_ips,
    global_purity,
    global_purity_from_ips,
    indices_of_purity,
    inverse_set,
    set_from_spectrum,
    set_temperature,
    spectrum_from_ips,
    summarize_spectrum,
    von_neumann_entropy,
)
from .states import DensityMatrix, Hamiltonian, gibbs_spectrum, gibbs_state, rel_entropy_coherence

__version__ = "0.1.0"

__all__ = [
    "DegenerateHamiltonianWarning", "NumericalError", "SamplingBudgetWarning",
    "ValidationError", "IndicesOfPurity", "Spectrum", "SpectralSummary",
    "degeneracy_plateau", "entropy_from_ips", "global_purity",
    "global_purity_from_ips", "indices_of_purity", "inverse_set",
    "set_from_spectrum", "set_temperature", "spectrum_from_ips",
    "summarize_spectrum", "von_neumann_entropy", "DensityMatrix", "Hamiltonian",
    "gibbs_spectrum", "gibbs_state", "rel_entropy_coherence",
]
