class IlpError(ValueError):
    """
    Raised for malformed input or a violated precondition of an operation.
    """


class IlpOverflowError(IlpError, OverflowError):
    """
    Raised when a coefficient, right-hand side or intermediate sum leaves the
    signed 64-bit range.
    """


class DecompositionError(IlpError):
    """
    Raised when an operation is handed a certificate that does not validate.
    The failing report is kept on the exception.
    """

    def __init__(self, message: str, report=None) -> None:
        self.report = report

        if report is not None and report.violations:
            details = "; ".join(f"{rule}: {detail}" for (rule, detail) in report.violations)
            message = f"{message} ({details})"

        super().__init__(message)


class DocumentError(IlpError):
    def __init__(self, message: str, path: str = "", line: int = None, column: int = None) -> None:
        self.path = path
        self.line = line
        self.column = column

        location = path
        if line is not None:
            location = f"line {line}, column {column}"

        super().__init__(f"{location}: {message}" if location else message)


class LpError(IlpError):
    pass


class ResourceCapError(RuntimeError):
    def __init__(self, cap: str, limit: int, requested: int, hint: str = "") -> None:
        self.cap = cap
        self.limit = limit
        self.requested = requested

        message = f"{cap} cap of {limit} exceeded (needs {requested})"
        if hint:
            message = f"{message}: {hint}"

        super().__init__(message)
