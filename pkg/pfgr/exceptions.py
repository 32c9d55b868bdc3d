# FILE: pfgr/exceptions.py
# ==============================================================================
from typing import Optional


class PFGRError(Exception):
    """Base class for every refusal or failure raised by the toolkit."""


class FormatError(PFGRError, ValueError):
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class RefusalError(PFGRError):
    """An input is valid but above a configured cap."""


class InfiniteDiameterError(PFGRError):
    def __init__(self, message: str = "infinite diameter: graph is disconnected"):
        super().__init__(message)


class InvalidDecompositionError(PFGRError, ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid tree decomposition: {report.summary()}")


class UnknownReductionError(PFGRError, KeyError):
    def __init__(self, reduction_id: str):
        self.reduction_id = reduction_id
        super().__init__(f"unknown reduction '{reduction_id}'")

    def __str__(self) -> str:
        return self.args[0]


class UnmappedParameterError(PFGRError, KeyError):
    def __init__(self, parameter: str):
        self.parameter = parameter
        super().__init__(f"parameter '{parameter}' has no image under the parameter mapping")

    def __str__(self) -> str:
        return self.args[0]


class UnsupportedFormError(PFGRError, ValueError):
    """An expression falls outside the running-time grammar."""


class DimensionMismatchError(PFGRError, ValueError):
    pass
