#!/usr/bin/env python
"""
Shared pytest setup: puts src/ on the import path and provides a pi reference
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

from services.mpnum import MPReal  # noqa: E402

PI_100 = ("3.1415926535897932384626433832795028841971693993751058209749445923"
          "078164062862089986280348253421170679")


@pytest.fixture
def pi_100() -> MPReal:
    """pi truncated to 100 decimals"""
    return MPReal.from_decimal_string(PI_100, 101)


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep tests away from any pi_config.json in the working directory"""
    import utils.piConfig as piConfig
    monkeypatch.setenv("PI_CONFIG_PATH", str(tmp_path / "pi_config.json"))
    monkeypatch.setattr(piConfig, "config_manager", None)
    yield
