"""
Tests for configuration loading and validation
"""

import pytest

from src.config import Config, load_key_value_file


def test_defaults_validate():
    Config.validate()


def test_info_is_plain_dict():
    info = Config.info()
    assert info["cert_tol"] == Config.CERT_TOL
    assert info["data_dir"] == str(Config.DATA_DIR)
    assert set(info) >= {"environment", "log_level", "oracle_resolution", "default_seed"}


def test_validate_lists_every_problem(monkeypatch):
    monkeypatch.setattr(Config, "CERT_TOL", -1.0)
    monkeypatch.setattr(Config, "ORACLE_RESOLUTION", 0.5)
    monkeypatch.setattr(Config, "LOG_LEVEL", "LOUD")
    with pytest.raises(EnvironmentError) as excinfo:
        Config.validate()
    message = str(excinfo.value)
    assert "MIRROR_POVM_CERT_TOL" in message
    assert "MIRROR_POVM_ORACLE_RESOLUTION" in message
    assert "LOG_LEVEL" in message


def test_ensure_directories(monkeypatch, tmp_path):
    target = tmp_path / "out" / "sweeps"
    monkeypatch.setattr(Config, "DATA_DIR", target)
    Config.ensure_directories()
    assert target.is_dir()


def test_load_key_value_file(tmp_path):
    path = tmp_path / "sweep.env"
    path.write_text("# sweep settings\nN_THETA=3\nn_p = 4\ncolumns=theta,p\n")
    values = load_key_value_file(path)
    assert values == {"n_theta": "3", "n_p": "4", "columns": "theta,p"}


def test_load_key_value_file_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_key_value_file(tmp_path / "absent.env")
