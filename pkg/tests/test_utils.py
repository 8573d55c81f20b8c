""" test settings loading and formatting helpers """

import logging

import pytest

from utils.config import DEFAULT_CONFIG_PATH, Settings, load_settings
from utils.errors import CapacityError, ElpError, ProgramSyntaxError
from utils.helpers import (
    configure_logging,
    format_atom_set,
    format_bool,
    format_family,
    maximal_sets,
    truncate_text,
)


def test_default_settings_file():
    settings = load_settings(DEFAULT_CONFIG_PATH)
    assert settings == Settings()


def test_partial_settings_file(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text("as_cap: 5\nunknown_key: 1\n", encoding="utf-8")
    settings = load_settings(path)
    assert settings.as_cap == 5
    assert settings.oracle_cap == Settings().oracle_cap


@pytest.mark.parametrize("content", ["- a\n- b\n", "as_cap: [\n"])
def test_bad_settings_fall_back(tmp_path, content):
    path = tmp_path / "s.yaml"
    path.write_text(content, encoding="utf-8")
    assert load_settings(path) == Settings()


def test_missing_settings_file(tmp_path):
    assert load_settings(tmp_path / "none.yaml") == Settings()


def test_environment_override(tmp_path, monkeypatch):
    path = tmp_path / "s.yaml"
    path.write_text("cycle_limit: 7\n", encoding="utf-8")
    monkeypatch.setenv("ELP_CONFIG", str(path))
    assert load_settings().cycle_limit == 7


def test_error_messages():
    assert str(CapacityError("layer", 30, 22)) == "layer: size 30 exceeds configured cap 22"
    assert issubclass(ProgramSyntaxError, ElpError)


def test_formatting():
    assert format_atom_set(["b", "a"]) == "{a, b}"
    assert format_atom_set([]) == "{}"
    assert format_family([["d", "a"], ["b"]]) == "{{a,d},{b}}"
    assert format_bool(False) == "false"
    assert truncate_text("abcdef", 5) == "ab..."
    assert truncate_text("abc", 5) == "abc"


def test_maximal_sets():
    family = [frozenset("a"), frozenset("ab"), frozenset("c"), frozenset("ab")]
    assert maximal_sets(family) == [frozenset("ab"), frozenset("c")]


def test_configure_logging_verbose():
    configure_logging("ERROR", verbose=True)
    assert logging.getLogger().level == logging.DEBUG
    configure_logging("WARNING")
    assert logging.getLogger().level == logging.WARNING
