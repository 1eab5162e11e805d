"""Exception types raised by set_thermo."""


class ValidationError(ValueError):
    """Input violates a documented invariant (bad spectrum, non-Hermitian matrix...)."""


class NumericalError(RuntimeError):
    """An internal numerical check failed; indicates a bug or extreme input."""


class DegenerateHamiltonianWarning(UserWarning):
    """Energy levels coincide; a deterministic tie-break was applied."""


class SamplingBudgetWarning(UserWarning):
    """A rejection sampler ran out of attempts and returned a partial result."""
