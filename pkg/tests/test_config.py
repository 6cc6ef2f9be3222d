import logging

import pytest
from pydantic import ValidationError

from app.core.config import Settings
from app.core.logs import configure_logging


def test_defaults():
    s = Settings(_env_file=None)
    assert s.DEFAULT_PRESET == "e8kem-2048-p5"
    assert s.POLY_MUL == "schoolbook"
    assert s.MAX_FRAME_BYTES == 1 << 20


def test_environment_override(monkeypatch):
    monkeypatch.setenv("POLY_MUL", "karatsuba")
    monkeypatch.setenv("EXCHANGE_PORT", "9000")
    s = Settings(_env_file=None)
    assert s.POLY_MUL == "karatsuba"
    assert s.EXCHANGE_PORT == 9000


@pytest.mark.parametrize("field,value", [
    ("POLY_MUL", "fft"),
    ("ANALYSIS_MODE", "symbolic"),
    ("ANALYSIS_ENUM_BUDGET", 0),
    ("MAX_FRAME_BYTES", -1),
])
def test_invalid_values(field, value):
    with pytest.raises(ValidationError):
        Settings(_env_file=None, **{field: value})


def test_configure_logging_is_idempotent():
    root = logging.getLogger()
    configure_logging("INFO")
    count = len(root.handlers)
    configure_logging("DEBUG")
    assert len(root.handlers) == count
    assert root.level == logging.DEBUG
    configure_logging("WARNING")
