"""Numerical tolerances shared across the package.

Every comparison threshold used by validation code lives here so that a
single edit changes the behaviour everywhere.
"""

#: Hermiticity check, relative to the largest entry.
HERMITIAN_RTOL = 1e-12

#: Allowed deviation of a density-matrix trace from one.
TRACE_ATOL = 1e-10

#: Most negative eigenvalue tolerated in a density matrix.
PSD_ATOL = 1e-10

#: Imaginary part allowed in the expectation of a Hermitian operator,
#: scaled by ``1 + |value|``.
IMAG_RTOL = 1e-10

#: Largest discarded Poisson weight allowed when truncating a coherent state.
FOCK_TAIL_TOL = 1e-12

#: Floating-point slop tolerated on the estimator radicand before erroring.
RADICAND_SLOP = 1e-9

#: |lambda / delta| above which the weak-coupling solution is flagged.
WEAK_COUPLING_LIMIT = 0.1

#: Default ceiling on the composite Hilbert-space dimension.
MAX_COMPOSITE_DIM = 5000
