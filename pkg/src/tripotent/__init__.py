"""Numerical checks for orthogonal tripotent matrices (A^3 = A = A*).

The package builds on a small dense complex matrix layer (:mod:`tripotent.core`),
the Moore-Penrose inverse and the Hartwig-Spindelböck decomposition
(:mod:`tripotent.decompositions`), class membership predicates
(:mod:`tripotent.classes`), one checker per characterization theorem
(:mod:`tripotent.characterizations`), seeded generators
(:mod:`tripotent.generators`) and a sweep/search driver (:mod:`tripotent.harness`).
"""

from .core import (
    DEFAULT_TOL,
    DimensionError,
    MatrixError,
    NotSquareError,
    ToleranceConfig,
    approx_eq,
    as_matrix,
    conj_transpose,
    frobenius_norm,
    loads_matrix,
    dumps_matrix,
    mat_mul,
    numerical_rank,
    read_matrix,
    trace,
    write_matrix,
)
from .decompositions import (
    ConvergenceError,
    HSDecomposition,
    NotHermitianError,
    check_commutation,
    gram_power,
    herm_eig,
    hs_decompose,
    mp_inverse,
    mp_via_hs,
    penrose_residuals,
    svd,
)
from .classes import (
    INTERSECTIONS,
    ClassLabel,
    NotThreeOPError,
    Signature,
    classify,
    hs_class_check,
    is_member,
    k_idempotent_reduce,
    signature,
)
from .characterizations import SideConditionError, TheoremReport, UnknownVariantError
from .generators import GenSpec, InfeasibleSpecError, generate, paper_examples, perturb, random_unitary
from .harness import SuiteConfig, SuiteReport, run_suite, search_counterexample

__version__ = "0.1.0"
