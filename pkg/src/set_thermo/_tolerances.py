"""Default numerical tolerances shared across modules.

Every public function that uses one of these accepts a keyword override.
"""

TRACE_TOL = 1e-10
IDENTITY_TOL = 1e-12
NEGATIVE_CLAMP = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
DEGENERACY_TOL = 1e-8
RANK_TOL = 1e-9
