"""Exact-arithmetic toolkit for deforming associative algebras.

Build finite-dimensional associative algebras from structure constants over
the Gaussian rationals, deform their products by linear operators, compute
Hochschild coboundaries / cohomology and the graded bracket of multilinear
maps, and classify derivations against pairs of associative structures. All
checks are exact; nothing is sampled or approximated.
"""

from .algebra import (
    Algebra,
    Decomposition,
    Element,
    Operator,
    banded_oscillator_algebra,
    decompose,
    diagonal_split,
    dual_number_algebra,
    full_matrix_algebra,
    matrix_unit_index,
    split_quaternion_algebra,
    transpose_operator,
    triangular_split,
    upper_triangular_algebra,
)
from .deform import (
    CriterionResult,
    ExtensionReport,
    Product,
    associativity_criterion,
    contraction_product,
    deform,
    deform_product,
    extend_tensor,
    interpolated_contraction_limit,
    is_nijenhuis,
    lie_bracket_of,
    lie_nijenhuis_check,
    mixed_associator_compatible,
    mu_product,
    power_product,
    product_sum,
    projection_tensor,
    sum_bracket_satisfies_jacobi,
    tensors_compatible,
    theorem5_product,
    torsion,
    total_skew_associator,
    verify_hierarchy,
)
from .dynamics import (
    BiHamiltonianReport,
    DerivationReport,
    commutator_derivation,
    example_check,
    inner_generator,
    is_bi_hamiltonian,
    is_derivation,
)
from .errors import AlgebraError, DocumentError, PreconditionError, SizeGuardError
from .hochschild import Cochain, coboundary, cohomology_dimension, gerstenhaber_bracket, is_cocycle
from .linalg import Matrix, kernel_basis, rank, solve_affine
from .scalar import Scalar, ScalarError, parse_scalar

__version__ = "0.1.0"
