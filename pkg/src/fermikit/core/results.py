"""Structured results and errors for fermikit."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from fermikit.core.errors import ErrorKind, FermikitError


@dataclass
class ErrorPayload(Exception):
    kind: ErrorKind
    message: str
    details: dict[str, Any] | None = None

    def __str__(self) -> str:
        return f"[{self.kind.value}] {self.message}"

    def as_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "kind": self.kind.value,
            "message": self.message,
        }
        if self.details:
            payload["details"] = self.details
        return payload

    @classmethod
    def from_error(cls, error: FermikitError, **details: Any) -> ErrorPayload:
        if error.cause is not None:
            details.setdefault("cause", f"{type(error.cause).__name__}: {error.cause}")
        return cls(kind=error.kind, message=error.message, details=details or None)


def significant(value: float, digits: int = 12) -> float:
    """Round to `digits` significant digits so reports print identically across runs."""
    return float(f"{value:.{digits}g}")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one invariant over all of its trials."""

    invariant: str
    passed: bool
    trials: int
    max_residual: float
    counterexample: dict[str, Any] | None = None

    @classmethod
    def exact(
        cls, invariant: str, *, trials: int, mismatches: int, counterexample: dict[str, Any] | None = None
    ) -> CheckResult:
        """Result for sign-table style checks where any mismatch fails."""
        return cls(
            invariant=invariant,
            passed=mismatches == 0,
            trials=trials,
            max_residual=float(mismatches),
            counterexample=counterexample if mismatches else None,
        )

    def as_dict(self, digits: int = 12) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "invariant": self.invariant,
            "passed": self.passed,
            "trials": self.trials,
            "max_residual": significant(self.max_residual, digits),
        }
        if self.counterexample is not None:
            payload["counterexample"] = self.counterexample
        return payload


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    max_modes: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def as_dict(self, digits: int = 12) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "max_modes": self.max_modes,
            "passed": self.passed,
            "results": [result.as_dict(digits) for result in self.results],
        }


@dataclass(frozen=True)
class CheckReport:
    suites: list[SuiteReport]

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)

    def summary(self) -> dict[str, int]:
        total = sum(len(suite.results) for suite in self.suites)
        failed = sum(1 for suite in self.suites for result in suite.results if not result.passed)
        return {"invariants": total, "passed": total - failed, "failed": failed}

    def as_dict(self, digits: int = 12) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "summary": self.summary(),
            "suites": [suite.as_dict(digits) for suite in self.suites],
        }
