"""Exception hierarchy.

Every error carries a stable ``code`` used by the command line front end:
2 for user errors, 3 for budget errors, 4 for internal invariant violations.
"""


class HfFregeError(Exception):
    code = 2


class UserError(HfFregeError):
    code = 2


class BudgetError(HfFregeError):
    code = 3


class InvariantViolation(HfFregeError):
    """Raised when a checked invariant fails. Must never happen."""

    code = 4


# hfset
class IndexOverflow(BudgetError):
    pass


class NotAPair(UserError):
    pass


class HfSyntaxError(UserError):
    pass


# syntax
class FormulaSyntaxError(UserError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnboundVariable(UserError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound variable {name!r}")


class NotPure(UserError):
    pass


class NonCanonical(UserError):
    pass


class DecodeError(UserError):
    pass


# model
class StageTooLarge(UserError):
    pass


class SegmentTooLarge(UserError):
    pass


class UniverseTooLarge(UserError):
    pass


class BudgetExceeded(BudgetError):
    def __init__(self, n_tried):
        self.n_tried = n_tried
        super().__init__(f"no equivalent formula among the first {n_tried} enumerated; raise the budget")


# abstraction
class NotEquivalence(UserError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ElementNotInUniverse(UserError):
    pass


class CardinalTooLarge(BudgetError):
    def __init__(self, cardinality, stage):
        self.cardinality = cardinality
        self.stage = stage
        super().__init__(
            f"scott cardinal of a {cardinality}-element set is too large to build "
            f"(all {cardinality}-element subsets of V_{stage})"
        )


class CrossUniverse(UserError):
    pass


# eliminate
class LiteralTooLarge(BudgetError):
    pass


class NotVStage(UserError):
    pass


class IndexTooLarge(BudgetError):
    pass
