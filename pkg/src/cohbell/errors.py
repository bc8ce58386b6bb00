"""Exception hierarchy shared by every module in the package."""


class CohBellError(ValueError):
    """Base class; subclasses ``ValueError`` so callers can catch either."""


class InvalidDimension(CohBellError):
    pass


class NotHermitian(CohBellError):
    pass


class InvalidState(CohBellError):
    pass


class InvalidDistribution(CohBellError):
    pass


class InvalidParameter(CohBellError):
    pass


class DegenerateObservable(CohBellError):
    pass


class InvalidSetting(CohBellError):
    """Raised when a basis matrix is not unitary."""
