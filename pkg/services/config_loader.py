import os
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "..", "config.yaml")

DEFAULTS: Dict[str, Any] = {
    "logging": {"level": "WARNING"},
    "corpus": {"seed": 20240611, "sampled_count": 5000, "quick_count": 300, "n_max": 8, "m_max": 20},
    "bench": {"k": 3, "sizes": [100000, 200000, 400000], "reps": 3, "workers": 1, "max_ratio": 2.5},
    "solver": {"max_k": 12},
}


def load_config(config_path: str) -> dict:
    """
    Loads and parses the YAML configuration file.
    """
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Configuration file not found at: {config_path}")
    with open(config_path, "r") as f:
        return yaml.safe_load(f) or {}


def load_settings(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Config file merged over DEFAULTS, then DFVS_* environment overrides (.env honored)."""
    load_dotenv()
    path = config_path or os.getenv("DFVS_CONFIG") or DEFAULT_CONFIG_PATH
    loaded = load_config(path)
    settings = {section: dict(values) for section, values in DEFAULTS.items()}
    for section, values in loaded.items():
        if isinstance(values, dict):
            settings.setdefault(section, {}).update(values)
        else:
            settings[section] = values
    seed = os.getenv("DFVS_SEED")
    if seed:
        settings["corpus"]["seed"] = int(seed)
    level = os.getenv("DFVS_LOG_LEVEL")
    if level:
        settings["logging"]["level"] = level.upper()
    return settings
