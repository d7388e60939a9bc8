from __future__ import annotations

from collections.abc import Iterator

import numpy as np
import pytest

from fermikit.core.config import use_settings


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def default_settings(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    for name in ("FERMIKIT_TOL", "FERMIKIT_MAX_MODES", "FERMIKIT_MAX_MAP_MODES"):
        monkeypatch.delenv(name, raising=False)
    with use_settings(tolerance=1e-10):
        yield
