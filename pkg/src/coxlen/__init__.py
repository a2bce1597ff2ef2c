"""Word problem and reflection length computations for Coxeter groups."""

from .core import (
    INF,
    BudgetExceeded,
    CoxeterSystem,
    CoxlenError,
    InvalidMatrix,
    NotADeletionSet,
    NotIdentity,
    OrbitLimitExceeded,
    ParseError,
    SearchLimits,
    SubsetBudgetExceeded,
    coxeter_power_word,
    from_matrix,
    parse_group,
    parse_word,
    single,
    triangle,
    universal,
)
from .geometric import PrecisionInconclusive, build_representation, matrix_is_identity
from .reflength import (
    ReflectionLength,
    all_deletion_sets,
    conjecture_scan,
    equality_criterion,
    lower_bound_theorem2,
    reflection_factorization,
    reflection_length,
    universal_reflection_length,
    verify_after_dyer,
)
from .rewriting import braid_orbit, canonical_form, is_identity, minimal_braid_moves_to_identity, reduce

__version__ = "0.1.0"
