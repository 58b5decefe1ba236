import pytest
import logging
import os
from configparser import NoSectionError

from src.config import DEFAULTS, SEED_ENV, ConfigHandler

logger = logging.getLogger(__name__)


@pytest.fixture
def cfg_path(tmp_path):
    return str(tmp_path) + "/ecbench.cfg"


def write(path, text):
    with open(path, "w") as f:
        f.write(text)


def test_initializing(cfg_path):
    config = ConfigHandler(cfg_path, logger)
    assert config.file == cfg_path
    assert os.path.exists(cfg_path)
    for section, values in DEFAULTS.items():
        for key, value in values.items():
            assert config.get(section, key) == value


def test_creates_missing_directory(tmp_path):
    path = str(tmp_path) + "/nested/dir/ecbench.cfg"
    ConfigHandler(path, logger)
    with open(path, "r") as f:
        text = f.read()
    assert "[bench]" in text
    assert "; curve file used when --curve is omitted" in text


def test_reload_config(cfg_path):
    config = ConfigHandler(cfg_path, logger)
    with pytest.raises(NoSectionError):
        config.get("extra", "trials")
    write(cfg_path, "[extra]\ntrials = 7")
    config.reload_config()
    assert config.get("extra", "trials") == "7"


def test_write_changes(cfg_path):
    config = ConfigHandler(cfg_path, logger)
    config.set("bench", "trials", "12")
    config.write_changes()
    with open(cfg_path, "r") as f:
        assert "trials = 12" in f.read()
    assert ConfigHandler(cfg_path, logger).int_setting("bench", "trials") == 12


def test_does_not_overwrite_existing_config(cfg_path):
    write(cfg_path, "[bench]\ntrials = 5")
    ConfigHandler(cfg_path, logger)
    with open(cfg_path, "r") as f:
        assert f.read() == "[bench]\ntrials = 5"


def test_safe_get(cfg_path):
    write(cfg_path, "[general]\ncurve = toy.curve")
    config = ConfigHandler(cfg_path, logger)
    assert config.safe_get("general", "curve") == "toy.curve"
    assert config.safe_get("general", "curve", "default") == "toy.curve"
    assert config.safe_get("general", "nope") is None
    assert config.safe_get("missing", "curve", "default") == "default"


def test_setting_falls_back_to_defaults(cfg_path):
    write(cfg_path, "[general]\ncurve = toy.curve")
    config = ConfigHandler(cfg_path, logger)
    assert config.setting("general", "curve") == "toy.curve"
    assert config.setting("general", "algorithm") == "l2r-naf"
    assert config.int_setting("verify", "exhaustive_bits") == 10
    assert config.setting("general", "unknown") is None


def test_int_setting_ignores_garbage(cfg_path):
    write(cfg_path, "[bench]\ntrials = many")
    assert ConfigHandler(cfg_path, logger).int_setting("bench", "trials") == 100


def test_seed_precedence(cfg_path, monkeypatch):
    write(cfg_path, "[bench]\nseed = 9")
    config = ConfigHandler(cfg_path, logger)
    monkeypatch.delenv(SEED_ENV, raising=False)
    assert config.resolve_seed() == 9
    monkeypatch.setenv(SEED_ENV, "0x10")
    assert config.resolve_seed() == 16
    assert config.resolve_seed(3) == 3
    monkeypatch.setenv(SEED_ENV, "junk")
    assert config.resolve_seed() == 9
