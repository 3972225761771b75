"""
Exception hierarchy shared by every package.

Each error carries the process exit code the CLI reports for it.
"""

from pathlib import Path
from typing import TYPE_CHECKING, Any, Optional, Union

from common.constants import ExitCode

if TYPE_CHECKING:
    from trial_log_io.schema import TrialLog


class UsvError(Exception):
    """Root of all toolkit errors."""

    exit_code: ExitCode = ExitCode.PROTOCOL

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class InputValidationError(UsvError):
    exit_code = ExitCode.VALIDATION


class GeoDomainError(InputValidationError):
    pass


class ConventionError(InputValidationError):
    pass


class ProtocolError(UsvError):
    exit_code = ExitCode.PROTOCOL


class ConvergenceError(ProtocolError):
    pass


class HeadingDiscontinuityError(ProtocolError):
    pass


class MetricsError(ProtocolError):
    pass


class TrialIncompleteError(ProtocolError):
    """Raised when a trial stops before its heading target; keeps the partial log."""

    def __init__(self, message: str, log: "TrialLog", **context: Any) -> None:
        super().__init__(message, **context)
        self.log = log


class NumericalError(UsvError):
    exit_code = ExitCode.PROTOCOL


class SingularityError(NumericalError):
    pass


class MeasurementRejected(UsvError):
    exit_code = ExitCode.PROTOCOL


class GateRejectedError(MeasurementRejected):
    pass


class StaleMeasurementError(MeasurementRejected):
    pass


class LogIOError(UsvError):
    exit_code = ExitCode.IO

    def __init__(
        self,
        message: str,
        path: Union[str, Path, None] = None,
        line: Optional[int] = None,
        **context: Any,
    ) -> None:
        if path is not None:
            context["path"] = str(path)
        if line is not None:
            context["line"] = line
        super().__init__(message, **context)
        self.path = path
        self.line = line


class SchemaVersionError(LogIOError):
    pass


class MalformedRecordError(LogIOError):
    pass
