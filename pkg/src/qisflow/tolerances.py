"""Numerical thresholds used throughout the package.

Every function that uses one of these takes a keyword argument of the same
(lower-case) name so callers can override it per call.
"""

# hermitian-core
HERMITIAN_ATOL = 1e-12
JACOBI_TOL = 1e-13  # off-diagonal Frobenius norm, relative to max(1, ||A||_F)
JACOBI_MAX_SWEEPS = 100

# constraint sets
UNIT_NORM_ATOL = 1e-10
TRACE_ATOL = 1e-10
TANGENT_ATOL = 1e-10
POSITIVITY_FLOOR = 1e-12  # min eigenvalue of an interior density matrix
COMPONENT_FLOOR = 1e-12  # |w_k| for membership in S_m
ORTHOGONAL_ATOL = 1e-10

# checks
FISHER_IMAG_ATOL = 1e-12
DEGENERATE_NORM = 1e-12

# finite differences
FD_STEP = 1e-5
