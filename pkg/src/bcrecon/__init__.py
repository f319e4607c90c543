"""Forward and inverse solver for third-order spectral problems with
non-separated boundary conditions.

The forward direction evaluates the characteristic determinant of

    y''' + lam*p1*y'' + lam^2*p2*y' + lam^3*p3*y = 0,
    U_i(y) = sum_k a_ik y^(k-1)(0) + a_i,k+3 y^(k-1)(1) = 0   (i = 1, 2, 3)

and locates its zeros (the eigenvalues) in a region of the complex plane.
The inverse direction recovers the 3x6 boundary matrix A, up to row span,
from 19 or more eigenvalues, via the 20 third-order minors of A.
"""

from .charode import (
    BoundaryValues,
    CharacteristicRoots,
    ConditionReport,
    ProblemCoefficients,
    boundary_values,
    characteristic_roots,
    check_uniqueness_conditions,
)
from .complexalg import SvdResult, det3, nullspace_vector, solve_cubic, svd
from .errors import (
    BcreconError,
    ContractViolation,
    InconsistentMinors,
    LambdaTooSmall,
    NoEigenvaluesFound,
    ProblemFormatError,
    RangeOverflow,
    RankDeficient,
    RepeatedRoots,
    SvdConvergenceError,
    TooFewEigenvalues,
    ZeroMinorVector,
)
from .fileio import ProblemSpec, load_problem, load_spectrum, save_problem, save_spectrum
from .forward import SearchRegion, Spectrum, char_det, find_eigenvalues, hadamard_residuals
from .inverse import (
    InversionSettings,
    PerturbationRecord,
    ReconstructionReport,
    assemble_system,
    invert_spectrum,
    perturbation_study,
)
from .pluecker import (
    TRIPLES,
    minors_of,
    reconstruct,
    span_distance,
    triple_position,
)

__all__ = [
    "BcreconError",
    "BoundaryValues",
    "CharacteristicRoots",
    "ConditionReport",
    "ContractViolation",
    "InconsistentMinors",
    "InversionSettings",
    "LambdaTooSmall",
    "NoEigenvaluesFound",
    "PerturbationRecord",
    "ProblemCoefficients",
    "ProblemFormatError",
    "ProblemSpec",
    "RangeOverflow",
    "RankDeficient",
    "ReconstructionReport",
    "RepeatedRoots",
    "SearchRegion",
    "Spectrum",
    "SvdConvergenceError",
    "SvdResult",
    "TooFewEigenvalues",
    "TRIPLES",
    "ZeroMinorVector",
    "assemble_system",
    "boundary_values",
    "char_det",
    "characteristic_roots",
    "check_uniqueness_conditions",
    "det3",
    "find_eigenvalues",
    "hadamard_residuals",
    "invert_spectrum",
    "load_problem",
    "load_spectrum",
    "minors_of",
    "nullspace_vector",
    "perturbation_study",
    "reconstruct",
    "save_problem",
    "save_spectrum",
    "solve_cubic",
    "span_distance",
    "svd",
    "triple_position",
]

__version__ = "0.1.0"
