"""Exception hierarchy shared by the engines."""


class QClusterError(Exception):
    """Base class for every error raised by this package."""

    code = "QClusterError"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class InvalidRank(QClusterError, ValueError):
    code = "InvalidRank"


class InvalidLabel(QClusterError, ValueError):
    code = "InvalidLabel"


class NotDominant(QClusterError, ValueError):
    code = "NotDominant"


class Undefined(QClusterError, ValueError):
    code = "Undefined"


class NonSpecialDetected(QClusterError):
    """The FM algorithm met a configuration it cannot resolve."""

    code = "NonSpecialDetected"

    def __init__(self, message, monomial=None):
        super().__init__(message)
        self.monomial = monomial


class BudgetExceeded(QClusterError):
    code = "BudgetExceeded"


class IncompleteCharacter(QClusterError):
    code = "IncompleteCharacter"


class ConstraintViolated(QClusterError, ValueError):
    code = "ConstraintViolated"


class Unsupported(QClusterError):
    code = "Unsupported"


class BoundaryVertex(QClusterError):
    code = "BoundaryVertex"


class NonExactDivision(QClusterError, ArithmeticError):
    code = "NonExactDivision"


class WindowTooSmall(QClusterError):
    code = "WindowTooSmall"

    def __init__(self, required):
        super().__init__(f"window depth too small, need depth >= {required}")
        self.required = required

    def to_dict(self):
        d = super().to_dict()
        d["required_depth"] = self.required
        return d


class AmbiguousMatch(QClusterError):
    code = "AmbiguousMatch"


class IncomparableExchange(QClusterError):
    code = "IncomparableExchange"
