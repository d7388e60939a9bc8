from __future__ import annotations

import threading
from dataclasses import replace

import pytest

from fermikit.core.config import Settings, get_settings, resolve_tol, use_settings
from fermikit.core.errors import ConfigError, ErrorKind, InputError, InvariantError, StateError
from fermikit.core.results import CheckReport, CheckResult, ErrorPayload, SuiteReport, significant


def test_settings_from_env() -> None:
    settings = Settings.from_env({"FERMIKIT_TOL": "1e-8", "FERMIKIT_MAX_MODES": "10"})
    assert settings.tolerance == 1e-8
    assert settings.max_modes == 10
    assert Settings.from_env({}).tolerance == 1e-10


def test_invalid_env_raises_config_error() -> None:
    with pytest.raises(ConfigError) as exc_info:
        Settings.from_env({"FERMIKIT_TOL": "-1"})
    assert exc_info.value.kind == ErrorKind.CONFIG
    assert exc_info.value.cause is not None
    with pytest.raises(ConfigError):
        Settings.from_env({"FERMIKIT_TOL": "tight"})


def test_use_settings_restores_previous() -> None:
    before = get_settings()
    with use_settings(tolerance=1e-6) as active:
        assert active.tolerance == 1e-6
        assert resolve_tol(None) == 1e-6
        assert resolve_tol(1e-3) == 1e-3
        with use_settings(tolerance=None) as nested:
            assert nested.tolerance == 1e-6
    assert get_settings() is before


def test_use_settings_is_scoped_per_thread() -> None:
    barrier = threading.Barrier(2)
    seen: dict[float, float] = {}

    def worker(tolerance: float) -> None:
        with use_settings(tolerance=tolerance):
            barrier.wait(timeout=5)
            seen[tolerance] = get_settings().tolerance
            barrier.wait(timeout=5)

    threads = [threading.Thread(target=worker, args=(tolerance,)) for tolerance in (1e-4, 1e-7)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert seen == {1e-4: 1e-4, 1e-7: 1e-7}


def test_settings_are_frozen() -> None:
    with pytest.raises(ConfigError):
        get_settings().updated(max_map_modes=99)
    with pytest.raises(ValueError):
        get_settings().tolerance = 1.0  # type: ignore[misc]


def test_error_kinds_and_numeric_flag() -> None:
    assert StateError("bad").numeric
    assert InvariantError("bad").numeric
    assert not InputError("bad").numeric
    assert str(InputError("no json")) == "[invalid_input] no json"
    cause = ValueError("inner")
    error = InputError("outer").with_cause(cause)
    assert error.cause is cause
    assert replace(error, message="changed").kind == ErrorKind.INVALID_INPUT


def test_error_payload_from_error() -> None:
    payload = ErrorPayload.from_error(InputError("bad payload", cause=KeyError("re")), command="tensor")
    data = payload.as_dict()
    assert data["kind"] == "invalid_input"
    assert data["details"]["command"] == "tensor"
    assert data["details"]["cause"].startswith("KeyError")
    assert "details" not in ErrorPayload(ErrorKind.STATE, "plain").as_dict()


def test_significant_digits() -> None:
    assert significant(1.23456789012345678) == 1.23456789012
    assert significant(0.0) == 0.0
    assert significant(123456.789, 3) == 123000.0


def test_check_report_summary() -> None:
    ok = CheckResult("a", passed=True, trials=3, max_residual=1e-15)
    bad = CheckResult.exact("b", trials=4, mismatches=2, counterexample={"modes": "{1,2}"})
    empty = CheckResult.exact("c", trials=4, mismatches=0, counterexample={"ignored": "yes"})
    report = CheckReport([SuiteReport("car", 7, 4, [ok, bad]), SuiteReport("phi", 7, 4, [empty])])
    assert not report.passed
    assert report.summary() == {"invariants": 3, "passed": 2, "failed": 1}
    data = report.as_dict()
    assert data["suites"][0]["results"][1]["counterexample"] == {"modes": "{1,2}"}
    assert "counterexample" not in data["suites"][1]["results"][0]
