import logging

from enums import ErrorCode, ExitCode


class FanoException(Exception):
    code: ErrorCode
    exit_code: ExitCode = ExitCode.Failure

    def __init__(self, code: ErrorCode, message: str) -> None:
        super().__init__(f'{code.value}: {message}')
        self.code = code
        logging.error(f'{code.value}: {message}')


class InvalidParameterError(FanoException):
    exit_code = ExitCode.InvalidParameters


class SingularGeneratorError(FanoException):
    exit_code = ExitCode.SingularGenerator

    def __init__(self, message: str) -> None:
        super().__init__(ErrorCode.SingularGenerator, message)


class IntegrationError(FanoException):
    exit_code = ExitCode.StepFailure

    def __init__(self, message: str) -> None:
        super().__init__(ErrorCode.StepFailure, message)


class OutputError(FanoException):
    exit_code = ExitCode.IoFailure

    def __init__(self, message: str) -> None:
        super().__init__(ErrorCode.IoFailure, message)


class IdentityViolationError(FanoException):
    exit_code = ExitCode.IdentityViolation

    def __init__(self, message: str) -> None:
        super().__init__(ErrorCode.IdentityViolation, message)
