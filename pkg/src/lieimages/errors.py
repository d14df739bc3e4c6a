"""Exception types shared by all modules."""


class LieImagesError(Exception):
    """Base class for every error raised by this package."""


class NotMultilinear(LieImagesError, ValueError):
    pass


class BadDegreeInY(LieImagesError, ValueError):
    pass


class GeneratorCountMismatch(LieImagesError, ValueError):
    pass


class UnassignedVariable(LieImagesError, KeyError):
    pass


class DegreeMismatch(LieImagesError, ValueError):
    pass


class ShapeMismatch(LieImagesError, ValueError):
    pass


class WrongDimension(LieImagesError, ValueError):
    pass


class NotTraceVanishing(LieImagesError, ValueError):
    pass


class DegenerateCurve(LieImagesError, RuntimeError):
    pass


class BudgetExceeded(LieImagesError, RuntimeError):
    """An enumeration or linear system would exceed its configured budget."""


class CapacityError(BudgetExceeded):
    pass


class InvariantViolation(LieImagesError, AssertionError):
    """Two independent computations disagreed where they must agree."""


class ParseError(LieImagesError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
