"""qpmut: exact-arithmetic cluster combinatorics.

Quiver mutation, quivers with potential, truncated Jacobian-algebra
dimensions, graded mutation search for derived equivalence, and a
combinatorial triangulated-surface model, exposed as a library, a CLI, and
a JSON-over-HTTP session service.
"""

from .explore import (
    acyclic_cluster_type,
    graded_equivalence_search,
    is_mutation_acyclic,
    mutation_class,
)
from .graded import (
    GradedQP,
    PresentedAlgebra,
    algebra_from_cut,
    graded_iso,
    left_mutate,
    make_graded,
    qp_from_algebra,
    qp_iso,
    right_mutate,
)
from .paths import (
    AlgebraElement,
    DimensionResult,
    Potential,
    build_preprojective,
    cyclic_derivative,
    make_element,
    make_potential,
    truncated_quotient_dimension,
)
from .qp import QP, dwz_mutate, is_rigid, jacobi_finite, premutate, reduce_qp
from .quiver import (
    ExchangeMatrix,
    Quiver,
    canonical_form,
    fz_mutate,
    fz_mutate_matrix,
    is_acyclic,
    to_exchange_matrix,
)
from .surface import Triangulation, flip, quiver_from_triangulation

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
