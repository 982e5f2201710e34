"""Tests for settings and logging setup."""
import pytest
from pydantic import ValidationError as PydanticValidationError

from runpatterns import __version__
from runpatterns.core.config import Settings
from runpatterns.core.logging import setup_logging
from runpatterns.schemas.pattern import PatternSpec, TrialParams
from runpatterns.services.chain import chain_service


def test_defaults_match_numerical_policy():
    """Tolerances and budgets default to the documented values."""
    settings = Settings()
    assert settings.NEGATIVE_CLAMP_TOLERANCE == 1e-12
    assert settings.PMF_SUM_TOLERANCE == 1e-10
    assert settings.WAITING_MMAX_CAP == 10_000
    assert settings.ORACLE_MAX_N == 22
    assert settings.FIB_MAX_INDEX == 40


def test_environment_overrides_use_prefix(monkeypatch):
    """Test RUNPATTERNS_ variables override defaults."""
    monkeypatch.setenv("RUNPATTERNS_ORACLE_MAX_N", "5")
    monkeypatch.setenv("RUNPATTERNS_LOG_LEVEL", "debug")
    settings = Settings()
    assert settings.ORACLE_MAX_N == 5
    assert settings.LOG_LEVEL == "DEBUG"


def test_unknown_log_format_rejected(monkeypatch):
    """Test only json and console log formats are accepted."""
    monkeypatch.setenv("RUNPATTERNS_LOG_FORMAT", "xml")
    with pytest.raises(PydanticValidationError):
        Settings()


def test_logs_go_to_stderr(capsys):
    """Structured events never reach stdout."""
    setup_logging("DEBUG")
    try:
        chain_service.build_chain(PatternSpec.t1(1, 1, 1), TrialParams(p=0.4))
    finally:
        captured = capsys.readouterr()
        setup_logging()
    assert "chain_built" in captured.err
    assert captured.out == ""


def test_version_comes_from_package():
    """Test the reported version is the package version."""
    assert Settings().APP_VERSION == __version__
    assert Settings().APP_NAME == "runpatterns"
