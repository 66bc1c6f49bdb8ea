"""Exact spectra and eigenbases of lazy random walks on complete d-ary
trees, with a Wilson-style lower bound on interchange-process mixing and a
seeded Monte Carlo simulator.

The analytic route (structured families + Sturm bisection on small
tridiagonal chains) scales to millions of nodes; the dense Jacobi oracle
in :mod:`treespectra.oracle` independently validates it on small trees.
"""

from .chains import (
    ChainMatrix,
    SymmetricTridiagonal,
    leaky_level_chain,
    level_chain,
    single_card_matrix,
    walk_matrix,
    walk_matvec,
)
from .eigenbasis import (
    EigenBasis,
    EigenvectorRecord,
    LevelProfile,
    antisymmetric_profile,
    build_full_basis,
    full_pivot_rank,
    is_completely_symmetric,
    is_energy_preserving,
    level_constancy_defect,
    level_sum_defect,
    lift_level_constant,
    lift_sibling_pair,
    profile_coefficients,
    symmetric_profile,
    verify_eigenpair,
    walk_residual,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .mixing import (
    InterchangeGap,
    WilsonReport,
    WilsonWitness,
    F_identity,
    F_statistic,
    contraction_factor,
    expected_square_increment,
    expected_statistic_after_step,
    gamma_from_lambda,
    interchange_gap,
    lambda_prime_from_lambda,
    variance_bound,
    wilson_lower_bound,
    wilson_witness,
)
from .oracle import (
    DenseEigenDecomposition,
    SpectrumComparison,
    dense_eigensolve_symmetric,
    spectrum_compare,
)
from .simulator import (
    DegenerateStatisticError,
    Permutation,
    SimulationConfig,
    TrajectoryStats,
    TVEstimate,
    apply_step,
    estimate_tv_lower_bound,
    exact_contraction_check,
    fisher_yates,
    run_trajectories,
    splitmix64,
    step,
    trial_generator,
)
from .spectrum import (
    LargestXResult,
    RootBracket,
    SpectralGap,
    SpectralLine,
    SpectrumTable,
    antisymmetric_eigenvalues,
    full_spectrum,
    lambda_from_x,
    largest_x,
    level_chain_eigenvalues,
    quadratic_residual,
    spectral_gap,
    symmetric_eigenvalues,
    tridiagonal_eigenvalues,
    verify_x_equation,
    x_from_lambda,
)
from .tree import (
    EdgeList,
    TreeGeometry,
    build_tree,
    edge_list,
    node_count,
    subtree_level_slice,
)

__version__ = "1.0.0"

__all__ = [
    "ChainMatrix",
    "DegenerateStatisticError",
    "DenseEigenDecomposition",
    "EdgeList",
    "EigenBasis",
    "EigenvectorRecord",
    "F_identity",
    "F_statistic",
    "InterchangeGap",
    "KERNEL_BACKEND",
    "LargestXResult",
    "LevelProfile",
    "Permutation",
    "RootBracket",
    "SimulationConfig",
    "SpectralGap",
    "SpectralLine",
    "SpectrumComparison",
    "SpectrumTable",
    "SymmetricTridiagonal",
    "TVEstimate",
    "TrajectoryStats",
    "TreeGeometry",
    "WilsonReport",
    "WilsonWitness",
    "antisymmetric_eigenvalues",
    "antisymmetric_profile",
    "apply_step",
    "build_full_basis",
    "build_tree",
    "contraction_factor",
    "dense_eigensolve_symmetric",
    "edge_list",
    "estimate_tv_lower_bound",
    "exact_contraction_check",
    "expected_square_increment",
    "expected_statistic_after_step",
    "fisher_yates",
    "full_pivot_rank",
    "full_spectrum",
    "gamma_from_lambda",
    "interchange_gap",
    "is_completely_symmetric",
    "is_energy_preserving",
    "lambda_from_x",
    "lambda_prime_from_lambda",
    "largest_x",
    "leaky_level_chain",
    "level_chain",
    "level_chain_eigenvalues",
    "level_constancy_defect",
    "level_sum_defect",
    "lift_level_constant",
    "lift_sibling_pair",
    "node_count",
    "profile_coefficients",
    "quadratic_residual",
    "run_trajectories",
    "single_card_matrix",
    "spectral_gap",
    "spectrum_compare",
    "splitmix64",
    "step",
    "subtree_level_slice",
    "symmetric_eigenvalues",
    "symmetric_profile",
    "trial_generator",
    "tridiagonal_eigenvalues",
    "variance_bound",
    "verify_eigenpair",
    "verify_x_equation",
    "walk_matrix",
    "walk_matvec",
    "walk_residual",
    "wilson_lower_bound",
    "wilson_witness",
    "x_from_lambda",
]
