"""Custom exceptions for the inequality checker with HTTP status and CLI exit codes."""

from typing import List, Optional


class IneqCheckError(Exception):
    """
    Base exception for inequality checker errors.

    Attributes:
        message: Human-readable error message.
        status_code: HTTP status code returned by the service.
        error_code: Machine-readable error code for API and CLI diagnostics.
        exit_code: Process exit code used by the command-line surface.
    """

    def __init__(
        self,
        message: str,
        status_code: int = 500,
        error_code: Optional[str] = None,
        exit_code: int = 3,
    ) -> None:
        self.message = message
        self.status_code = status_code
        self.error_code = error_code
        self.exit_code = exit_code
        super().__init__(self.message)


class DomainError(IneqCheckError):
    """Raised when a parameter lies outside the domain of a formula or definition."""

    def __init__(self, parameter: str, value: object, requirement: str) -> None:
        message = f"Parameter {parameter}={value!r} is out of domain: {requirement}"
        super().__init__(message, status_code=422, error_code="DOMAIN_ERROR")
        self.parameter = parameter
        self.value = value
        self.requirement = requirement


class ArgumentRangeError(IneqCheckError):
    """Raised when a special-function argument or result leaves the supported range."""

    def __init__(self, function: str, detail: str) -> None:
        message = f"{function}: {detail}"
        super().__init__(message, status_code=422, error_code="ARGUMENT_OUT_OF_RANGE")
        self.function = function


class EvaluationError(IneqCheckError):
    """Raised when a test function returns a non-finite value at some point."""

    def __init__(self, function_id: str, x: float, value: float) -> None:
        message = f"Function '{function_id}' is not finite at x={x!r} (value {value!r})"
        super().__init__(
            message, status_code=500, error_code="NON_FINITE_EVALUATION", exit_code=2
        )
        self.function_id = function_id
        self.x = x
        self.value = value


class FunctionNotFoundError(IneqCheckError):
    """Raised when a requested function id does not exist in the catalog."""

    def __init__(self, function_id: str, available_functions: List[str]) -> None:
        message = (
            f"Function '{function_id}' not found. "
            f"Available functions: {', '.join(available_functions)}"
        )
        super().__init__(message, status_code=404, error_code="FUNCTION_NOT_FOUND")
        self.function_id = function_id
        self.available_functions = available_functions


class UsageError(IneqCheckError):
    """Raised for incomplete or contradictory command parameters."""

    def __init__(self, message: str) -> None:
        super().__init__(message, status_code=400, error_code="USAGE_ERROR")


class GenerationError(IneqCheckError):
    """Raised when a random generator cannot produce a certified class member."""

    def __init__(self, class_label: str, seed: int, attempts: int) -> None:
        message = (
            f"Could not generate a certified {class_label} member "
            f"(seed {seed}) after {attempts} attempts"
        )
        super().__init__(message, status_code=422, error_code="GENERATION_INFEASIBLE")
        self.class_label = class_label
        self.seed = seed
        self.attempts = attempts


class ConfigError(IneqCheckError, ValueError):
    """Raised when a run or sweep configuration file is invalid (all problems at once)."""

    def __init__(self, message: str) -> None:
        super().__init__(message, status_code=400, error_code="CONFIG_ERROR")
