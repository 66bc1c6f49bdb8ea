"""Numerical tolerances used across the package.

Collected in one place so tests and library code agree on what "equal"
means.  Values are grouped by the kind of comparison; each is the loosest
bound that the underlying arithmetic is expected to satisfy with margin.
"""

# Bisection / root finding --------------------------------------------------
# Final bracket width for the tridiagonal Sturm bisection, before polish.
BISECTION_WIDTH = 1e-13
# Newton polish steps applied after bisection (guarded to stay in bracket).
POLISH_STEPS = 3

# Eigenvalue / eigenvector consistency --------------------------------------
# Residual of the scalar equation each spectral parameter x must satisfy.
X_EQUATION_RESIDUAL = 1e-9
# Terminal three-term recurrence residual for eigenvector profiles.
EIGEN_RESIDUAL = 1e-9
# Agreement between recurrence-generated profiles and their closed forms.
CLOSED_FORM_AGREEMENT = 1e-8
# Matching analytic eigenvalues against the dense oracle.
ORACLE_MATCH = 1e-8
# Two analytic eigenvalues closer than this are treated as one (they never
# are, for valid inputs; this guards the merge step).
MERGE_WIDTH = 1e-10

# Dense Jacobi oracle -------------------------------------------------------
# Off-diagonal Frobenius mass relative to the input Frobenius norm.
ORACLE_OFFDIAG = 1e-14
# Max-norm residual of M V - V diag(w), scaled by n.
ORACLE_RESIDUAL_PER_N = 1e-10
# Largest matrix the dense oracle will accept.
ORACLE_MAX_N = 5000
# Required symmetry of the oracle's input.
ORACLE_SYMMETRY = 1e-12

# Structure checks ----------------------------------------------------------
DETAILED_BALANCE = 1e-14
AFFINE_IDENTITY = 1e-15
LEVEL_CONSTANT = 1e-12
LEVEL_SUM = 1e-10
RANK_PIVOT = 1e-8
ORTHOGONALITY = 1e-8
EIGENSPACE_PROJECTION = 1e-7

# Mixing-time machinery -----------------------------------------------------
# One-step contraction ratio of the lifted eigenstatistic (exact identity,
# checked in floating point).
CONTRACTION_RATIO = 1e-12
# gamma vs. 1 - lambda' — absolute, because both are computed from the same
# rounded lambda2 and the difference is dominated by that shared rounding.
GAMMA_IDENTITY_ABS = 1e-14
LAMBDA_PAIR_RELATIVE = 1e-12
