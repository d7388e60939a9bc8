"""Core utilities for fermikit."""

from fermikit.core.config import Settings, get_settings, resolve_tol, use_settings
from fermikit.core.errors import (
    ConfigError,
    DomainError,
    ErrorKind,
    FermikitError,
    InputError,
    InvariantError,
    PartitionError,
    SectorError,
    ShapeError,
    StateError,
)
from fermikit.core.results import CheckReport, CheckResult, ErrorPayload, SuiteReport

__all__ = [
    "CheckReport",
    "CheckResult",
    "ConfigError",
    "DomainError",
    "ErrorKind",
    "ErrorPayload",
    "FermikitError",
    "InputError",
    "InvariantError",
    "PartitionError",
    "SectorError",
    "Settings",
    "ShapeError",
    "StateError",
    "SuiteReport",
    "get_settings",
    "resolve_tol",
    "use_settings",
]
