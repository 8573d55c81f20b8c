"""
Settings for the ELP toolkit
Loads config/settings.yaml (or the file named by ELP_CONFIG) with safe defaults
"""

import logging
import os
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "settings.yaml"


@dataclass(frozen=True)
class Settings:
    """Desk-scale caps and CLI defaults"""

    as_cap: int = 22
    oracle_cap: int = 12
    cycle_limit: int = 2000
    default_semantics: str = "as"
    default_reduct: str = "shen-eiter"
    default_method: str = "scenario"
    log_level: str = "WARNING"


def _read_yaml(path: Path) -> Dict[str, Any]:
    """
    Read a YAML mapping from disk

    Args:
        path: File to read

    Returns:
        The mapping, or an empty dict when the file is missing or malformed
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except FileNotFoundError:
        logger.debug("settings file %s not found, using defaults", path)
        return {}
    except (OSError, yaml.YAMLError) as exc:
        logger.warning("could not read settings file %s: %s", path, exc)
        return {}

    if not isinstance(data, dict):
        logger.warning("settings file %s is not a mapping, ignored", path)
        return {}
    return data


def load_settings(path: Optional[Path] = None) -> Settings:
    """
    Build Settings from a YAML file

    Args:
        path: Explicit file; defaults to $ELP_CONFIG, then config/settings.yaml

    Returns:
        Settings with unknown keys ignored
    """
    if path is None:
        env_path = os.environ.get("ELP_CONFIG")
        path = Path(env_path) if env_path else DEFAULT_CONFIG_PATH

    raw = _read_yaml(Path(path))
    known = {f.name for f in fields(Settings)}
    unknown = sorted(set(raw) - known)
    if unknown:
        logger.warning("ignoring unknown settings: %s", ", ".join(unknown))

    return Settings(**{k: v for k, v in raw.items() if k in known})


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get cached settings instance"""
    return load_settings()


def reload_settings() -> Settings:
    """Drop the cached settings and read them again"""
    get_settings.cache_clear()
    return get_settings()
