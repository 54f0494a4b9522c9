"""Exception hierarchy shared by all qpmut modules."""


class QpmutError(Exception):
    """Base class; `code` is the stable machine-readable error identifier."""

    code = "error"


class PreconditionError(QpmutError):
    """An operation was called on input violating its stated precondition."""

    code = "precondition"


class BudgetError(QpmutError):
    """A bounded computation ran out of its budget (depth, size, truncation)."""

    code = "budget"


class UnknownVertex(PreconditionError):
    code = "unknown_vertex"


class UnknownArrow(PreconditionError):
    code = "unknown_arrow"


class LoopOrTwoCyclePresent(PreconditionError):
    code = "loop_or_two_cycle"


class LoopAtVertex(PreconditionError):
    code = "loop_at_vertex"


class TwoCycleAtVertex(PreconditionError):
    code = "two_cycle_at_vertex"


class NotAcyclic(PreconditionError):
    code = "not_acyclic"


class IndexOutOfRange(PreconditionError):
    code = "index_out_of_range"


class BoundTooSmall(PreconditionError):
    code = "bound_too_small"


class MalformedRelation(PreconditionError):
    code = "malformed_relation"


class BadDegrees(PreconditionError):
    code = "bad_degrees"


class HomogeneityViolation(QpmutError):
    """Internal consistency failure: a graded mutation produced an
    inhomogeneous potential.  Always a bug, never valid output."""

    code = "homogeneity_violation"


class InvalidTriangulation(PreconditionError):
    code = "invalid_triangulation"


class BoundarySide(PreconditionError):
    code = "boundary_side"


class SelfFoldedConfiguration(PreconditionError):
    code = "self_folded"


class TruncationOverflow(BudgetError):
    code = "truncation_overflow"


class MalformedInput(PreconditionError):
    code = "malformed_input"
