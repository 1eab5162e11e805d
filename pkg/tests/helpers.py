"""Shared generators for the test suite."""

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays


def random_spectra(rng, d, n):
    """Descending spectra with a spread of ranks and entropies."""
    alpha = np.exp(rng.uniform(np.log(0.05), np.log(10.0), size=(n, 1)))
    g = rng.gamma(np.broadcast_to(alpha, (n, d)))
    lam = g / g.sum(axis=1, keepdims=True)
    return -np.sort(-lam, axis=1)


@st.composite
def spectra(draw, min_d=2, max_d=8):
    d = draw(st.integers(min_d, max_d))
    w = draw(arrays(np.float64, d, elements=st.floats(0.0, 1.0)))
    if w.sum() <= 1e-3:
        w = np.ones(d)
    lam = -np.sort(-w / w.sum())
    return lam
