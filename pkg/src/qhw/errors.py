"""Exception types shared across the package."""


class QhwError(Exception):
    """Base class for all package errors."""


class QuiverSyntaxError(QhwError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DuplicateNameError(QhwError):
    pass


class UnknownVertexError(QhwError):
    pass


class QuiverMismatchError(QhwError):
    pass


class DegreeOutsideWindowError(QhwError):
    pass


class VertexIsSinkError(QhwError):
    pass


class HasSinkError(QhwError):
    pass


class NotComposableError(QhwError):
    pass


class WindowTooSmallError(QhwError):
    pass


class StageNotStronglyGradedError(QhwError):
    pass


class InvalidStageError(QhwError):
    pass


class NotAModuleError(QhwError):
    pass


class NotGorensteinProjectiveError(QhwError):
    pass


class NotSemisimpleError(QhwError):
    pass


class WindowNotGeneratedError(QhwError):
    pass
