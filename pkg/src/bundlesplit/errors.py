"""Exception types. Each carries a stable ``code`` used by the CLI and tests."""


class SplitError(Exception):
    code = "SPLIT_ERROR"


class EmptyInstanceError(SplitError):
    code = "EMPTY_INSTANCE"


class ShapeMismatchError(SplitError):
    code = "MISMATCHED_SHAPE"


class MalformedInputError(SplitError):
    code = "MALFORMED_INPUT"


class NoCandidateError(SplitError):
    code = "NO_CANDIDATE"


class InfeasibleM2Error(SplitError):
    code = "INFEASIBLE_M2"


class SearchExhaustedError(SplitError):
    code = "EXHAUSTED"


class BudgetExceededError(SplitError):
    code = "BUDGET_EXCEEDED"


class WorkLimitError(SplitError):
    code = "WORK_LIMIT"


class TooFewCookiesError(SplitError):
    code = "TOO_FEW_COOKIES"


class InvariantViolation(SplitError):
    code = "INVARIANT_VIOLATION"
