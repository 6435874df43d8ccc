"""
Exception classes for bincompletion
Structured error handling for instances, solvers and the benchmark harness
"""

from typing import Any, Dict, List, Optional


class BinCompletionError(Exception):
    """Base exception for all bincompletion errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ):
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        self.cause = cause

        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary representation."""
        result = {
            "error": self.error_code,
            "message": self.message,
            "details": self.details,
        }

        if self.cause:
            result["cause"] = str(self.cause)

        return result

    def __str__(self) -> str:
        parts = [f"{self.error_code}: {self.message}"]

        if self.details:
            parts.append(f"Details: {self.details}")

        if self.cause:
            parts.append(f"Caused by: {self.cause}")

        return " | ".join(parts)


class InstanceValidationError(BinCompletionError):
    """An instance, item or generator spec violates one of its invariants."""

    def __init__(
        self,
        message: str,
        field_errors: Optional[Dict[str, List[str]]] = None,
        validation_context: Optional[str] = None,
        **kwargs
    ):
        self.field_errors = field_errors or {}
        self.validation_context = validation_context

        details = kwargs.pop("details", {})
        details.update({
            "field_errors": field_errors,
            "validation_context": validation_context,
        })

        super().__init__(
            message,
            error_code="INSTANCE_VALIDATION_ERROR",
            details=details,
            **kwargs
        )


class InstanceParseError(BinCompletionError):
    """Malformed instance or solution file."""

    def __init__(
        self,
        message: str,
        line_number: Optional[int] = None,
        field_name: Optional[str] = None,
        line_sample: Optional[str] = None,
        **kwargs
    ):
        self.line_number = line_number
        self.field_name = field_name
        self.line_sample = line_sample

        details = kwargs.pop("details", {})
        details.update({
            "line_number": line_number,
            "field_name": field_name,
            "line_sample": line_sample,
        })

        if line_number is not None:
            message = f"line {line_number} ({field_name or 'unknown field'}): {message}"

        super().__init__(
            message,
            error_code="INSTANCE_PARSE_ERROR",
            details=details,
            **kwargs
        )


class OracleLimitError(BinCompletionError):
    """The exhaustive oracle refuses instances above its item limit."""

    def __init__(
        self,
        message: str = "Instance too large for the exhaustive oracle",
        n_items: Optional[int] = None,
        limit: Optional[int] = None,
        **kwargs
    ):
        self.n_items = n_items
        self.limit = limit

        details = kwargs.pop("details", {})
        details.update({
            "n_items": n_items,
            "limit": limit,
        })

        super().__init__(
            message,
            error_code="ORACLE_LIMIT_ERROR",
            details=details,
            **kwargs
        )


class GenerationBudgetError(BinCompletionError):
    """Rejection sampling could not produce an acceptable instance."""

    def __init__(
        self,
        message: str,
        attempts: Optional[int] = None,
        spec: Optional[Dict[str, Any]] = None,
        **kwargs
    ):
        self.attempts = attempts
        self.spec = spec or {}

        details = kwargs.pop("details", {})
        details.update({
            "attempts": attempts,
            "spec": spec,
        })

        super().__init__(
            message,
            error_code="GENERATION_BUDGET_ERROR",
            details=details,
            **kwargs
        )


class ConfigError(BinCompletionError):
    """Exception for configuration errors."""

    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        config_value: Optional[str] = None,
        **kwargs
    ):
        self.config_key = config_key
        self.config_value = config_value

        details = kwargs.pop("details", {})
        details.update({
            "config_key": config_key,
            "config_value": config_value,
        })

        super().__init__(
            message,
            error_code="CONFIG_ERROR",
            details=details,
            **kwargs
        )


class KindMismatchError(BinCompletionError):
    """A kind-specific solver was handed an instance of another kind."""

    def __init__(self, expected: str, actual: str, **kwargs):
        self.expected = expected
        self.actual = actual

        details = kwargs.pop("details", {})
        details.update({"expected": expected, "actual": actual})

        super().__init__(
            f"Solver expects {expected} instances, got {actual}",
            error_code="KIND_MISMATCH_ERROR",
            details=details,
            **kwargs
        )


class SearchLimitReached(BinCompletionError):
    """Raised at a node boundary when the time or node limit is hit.

    Solvers catch this and report TimeLimit/NodeLimit; it never escapes solve().
    """

    def __init__(
        self,
        limit_kind: str,
        nodes: int = 0,
        elapsed: float = 0.0,
        **kwargs
    ):
        self.limit_kind = limit_kind
        self.nodes = nodes
        self.elapsed = elapsed

        details = kwargs.pop("details", {})
        details.update({
            "limit_kind": limit_kind,
            "nodes": nodes,
            "elapsed": elapsed,
        })

        super().__init__(
            f"Search stopped by {limit_kind} limit",
            error_code="SEARCH_LIMIT_REACHED",
            details=details,
            **kwargs
        )


class BenchError(BinCompletionError):
    """Exception for benchmark harness errors."""

    def __init__(
        self,
        message: str,
        instance_dir: Optional[str] = None,
        **kwargs
    ):
        self.instance_dir = instance_dir

        details = kwargs.pop("details", {})
        details["instance_dir"] = instance_dir

        super().__init__(
            message,
            error_code="BENCH_ERROR",
            details=details,
            **kwargs
        )
