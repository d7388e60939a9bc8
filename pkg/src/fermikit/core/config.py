"""Numeric settings, scoped per thread and per task through a context variable."""

from __future__ import annotations

import logging
import os
from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from fermikit.__about__ import DEFAULT_MAX_MAP_MODES, DEFAULT_MAX_MODES, DEFAULT_TOLERANCE
from fermikit.core.errors import ConfigError

logger = logging.getLogger(__name__)

ENV_FIELDS = {
    "FERMIKIT_TOL": "tolerance",
    "FERMIKIT_MAX_MODES": "max_modes",
    "FERMIKIT_MAX_MAP_MODES": "max_map_modes",
}


class Settings(BaseModel):
    """Tolerances and size caps shared by every operation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tolerance: float = Field(default=DEFAULT_TOLERANCE, gt=0.0)
    locality_tolerance: float = Field(default=1e-8, gt=0.0)
    max_modes: int = Field(default=DEFAULT_MAX_MODES, ge=0, le=24)
    max_map_modes: int = Field(default=DEFAULT_MAX_MAP_MODES, ge=0, le=8)
    significant_digits: int = Field(default=12, ge=1, le=17)

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> Settings:
        env = os.environ if environ is None else environ
        values: dict[str, Any] = {field: env[name] for name, field in ENV_FIELDS.items() if env.get(name)}
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            raise ConfigError(f"Invalid environment settings: {sorted(values)}.", cause=exc) from exc

    def updated(self, **overrides: Any) -> Settings:
        values = self.model_dump()
        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return type(self).model_validate(values)
        except ValidationError as exc:
            raise ConfigError(f"Invalid settings override: {sorted(overrides)}.", cause=exc) from exc


_active: ContextVar[Settings | None] = ContextVar("fermikit_settings", default=None)


def get_settings() -> Settings:
    active = _active.get()
    if active is None:
        active = Settings.from_env()
        _active.set(active)
        logger.debug("loaded settings %s", active)
    return active


@contextmanager
def use_settings(settings: Settings | None = None, **overrides: Any) -> Iterator[Settings]:
    """Temporarily replace the active settings."""
    active = (settings or get_settings()).updated(**overrides)
    token = _active.set(active)
    try:
        yield active
    finally:
        _active.reset(token)


def resolve_tol(tol: float | None) -> float:
    return get_settings().tolerance if tol is None else tol
