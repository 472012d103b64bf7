"""Heffter arrays, crazy knight's tours, and biembeddings of K_{m x t}."""

from .bounds import BoundQuery, BoundResult, binary_entropy, binom, derangements, evaluate_bound
from .embedding import (
    BiembeddingReport,
    CombinatorialEmbedding,
    Face,
    FaceSet,
    biembedding_report,
    build_embedding,
    build_rho0,
    genus_formula,
    trace_faces,
)
from .iso import (
    EmbeddingMap,
    StabilizerGroup,
    certify_distinct,
    classify,
    find_isomorphism,
    phi_map,
    stabilizer,
    verify_map,
)
from .knight import (
    BudgetExceededError,
    FamilySpec,
    OrientationPair,
    SolutionFamily,
    TourResult,
    build_family,
    cyclic_criterion,
    cyclic_criterion_perms,
    enumerate_solutions,
    is_solution,
    negated,
    pairs_family,
    power_two_family,
    prime_family,
    seven_diagonal_family,
    strip_criterion,
    successor,
    swapped,
    three_diagonal_family,
    tour,
)
from .perm import Permutation
from .pfarray import (
    ArrayFormatError,
    DiagonalProfile,
    NotDiagonalError,
    PartiallyFilledArray,
    Skeleton,
    classify_diagonality,
    cyclic_diagonal_skeleton,
    diagonal_skeleton,
    parse_array,
    parse_skeleton_json,
)
from .validation import (
    LineOrderingSet,
    Ordering,
    ValidationReport,
    are_compatible,
    composed_cycle,
    find_simple_line_orderings,
    is_globally_simple,
    is_simple_ordering,
    natural_orderings,
    orderings_from_orientations,
    search_heffter,
    validate_heffter,
)

__version__ = "0.1.0"
