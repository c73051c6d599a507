from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


class ArakZetaError(Exception):
    """Base class for every error raised by the package."""


class InputError(ArakZetaError, ValueError):
    """Malformed or unsupported input."""


class InvariantViolation(InputError):
    """Input data failed a named consistency check."""

    def __init__(self, check: str, residual: float, message: Optional[str] = None) -> None:
        self.check = check
        self.residual = residual
        text = message or f"invariant '{check}' violated (residual {residual:.3e})"
        super().__init__(text)


class DataError(InputError):
    """Inconsistent curve or rational-function data."""


class NumericError(ArakZetaError, ArithmeticError):
    """A numerical routine failed to reach its tolerance."""


class PoleError(NumericError):
    """Evaluation requested too close to a pole."""

    def __init__(self, point: complex, residue: Optional[complex] = None, message: Optional[str] = None) -> None:
        self.point = point
        self.residue = residue
        text = message or f"evaluation point {point} is within the pole guard"
        super().__init__(text)


class DomainError(ArakZetaError, ValueError):
    """Argument outside the region where an operation is defined."""


class CapabilityError(ArakZetaError, NotImplementedError):
    """The requested computation is not supported for the given data."""


@dataclass(slots=True)
class TwoVarZetaValue:
    value: complex
    est_error: float
    s: complex
    w: complex

    def __post_init__(self) -> None:
        if self.est_error < 0:
            raise ValueError("'est_error' must be non-negative")


@dataclass(slots=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    residual: Optional[float] = None


@dataclass(slots=True)
class VerificationStats:
    passed: int = 0
    failed: int = 0
    errored: int = 0
    failures: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def register(self, result: CheckResult) -> None:
        if result.passed:
            self.passed += 1
            return
        self.failed += 1
        self.failures.append(f"{result.name}: {result.detail}")

    def register_error(self, name: str, message: str) -> None:
        self.errored += 1
        self.failures.append(f"{name}: {message}")

    def register_warning(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.errored

    @property
    def all_passed(self) -> bool:
        return self.failed == 0 and self.errored == 0
