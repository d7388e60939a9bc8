"""Error definitions for fermikit."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import StrEnum


class ErrorKind(StrEnum):
    """Stable error kinds for caller decisions."""

    DOMAIN = "domain"
    PARTITION = "partition"
    SHAPE = "shape"
    SECTOR = "sector"
    INVALID_INPUT = "invalid_input"
    STATE = "state"
    CONFIG = "config"
    INVARIANT = "invariant"


@dataclass(frozen=True)
class FermikitError(Exception):
    """Public error type for fermikit."""

    kind: ErrorKind
    message: str
    cause: Exception | None = None

    def __str__(self) -> str:
        return f"[{self.kind.value}] {self.message}"

    def with_cause(self, cause: Exception) -> FermikitError:
        return replace(self, cause=cause)

    @property
    def numeric(self) -> bool:
        """True for failed numeric invariants, as opposed to malformed input."""
        return self.kind in (ErrorKind.STATE, ErrorKind.INVARIANT)


# Subclasses pin their kind; `kind` stays a keyword so `replace` keeps working.


class DomainError(FermikitError):
    """A pattern, label or mode subset lies outside the expected mode set."""

    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.DOMAIN) -> None:
        super().__init__(kind, message, cause)


class PartitionError(FermikitError):
    """Parts are empty, overlap, or fail to cover the mode set."""

    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.PARTITION) -> None:
        super().__init__(kind, message, cause)


class ShapeError(FermikitError):
    """A matrix does not match the dimension of its mode set."""

    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.SHAPE) -> None:
        super().__init__(kind, message, cause)


class SectorError(FermikitError):
    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.SECTOR) -> None:
        super().__init__(kind, message, cause)


class InputError(FermikitError):
    def __init__(
        self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.INVALID_INPUT
    ) -> None:
        super().__init__(kind, message, cause)


class StateError(FermikitError):
    """A matrix claimed to be a density matrix is not one."""

    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.STATE) -> None:
        super().__init__(kind, message, cause)


class ConfigError(FermikitError):
    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.CONFIG) -> None:
        super().__init__(kind, message, cause)


class InvariantError(FermikitError):
    """A computed identity disagreed with its closed form beyond tolerance."""

    def __init__(self, message: str, cause: Exception | None = None, kind: ErrorKind = ErrorKind.INVARIANT) -> None:
        super().__init__(kind, message, cause)
