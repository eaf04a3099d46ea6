"""
Application Settings Management.

Loads pipeline defaults and runtime knobs from an external JSON config file.
Settings are stored in data/config/ and can be updated without rebuilding the exe.
"""

import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from modules.engine.parameters import Parameters
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

# Keys forwarded to engine Parameters
PARAMETER_KEYS = (
    "c_ball",
    "n_ball",
    "delta_ball",
    "delta_ode",
    "delta_coarse",
    "delta_fine",
    "delta_quad",
    "type2_rule",
    "max_trace_steps",
    "max_newton_iterations",
)


class Settings:
    """Application settings container."""

    def __init__(self, settings_dict: Optional[Dict[str, Any]] = None):
        """
        Initialize settings from dictionary.

        Args:
            settings_dict: Dictionary of settings, or None to use defaults
        """
        defaults = get_default_settings()
        if settings_dict is None:
            settings_dict = defaults

        self.c_ball = float(settings_dict.get("c_ball", defaults["c_ball"]))
        self.n_ball = int(settings_dict.get("n_ball", defaults["n_ball"]))
        self.delta_ball = settings_dict.get("delta_ball", defaults["delta_ball"])  # None = automatic
        self.delta_ode = float(settings_dict.get("delta_ode", defaults["delta_ode"]))
        self.delta_coarse = float(settings_dict.get("delta_coarse", defaults["delta_coarse"]))
        self.delta_fine = float(settings_dict.get("delta_fine", defaults["delta_fine"]))
        self.delta_quad = float(settings_dict.get("delta_quad", defaults["delta_quad"]))
        self.type2_rule = settings_dict.get("type2_rule", defaults["type2_rule"])
        self.max_trace_steps = int(settings_dict.get("max_trace_steps", defaults["max_trace_steps"]))
        self.max_newton_iterations = int(
            settings_dict.get("max_newton_iterations", defaults["max_newton_iterations"])
        )

        # Runtime knobs for grid and bench runs
        self.max_workers = int(settings_dict.get("max_workers", defaults["max_workers"]))
        self.grid_chunksize = int(settings_dict.get("grid_chunksize", defaults["grid_chunksize"]))
        self.log_level = settings_dict.get("log_level", defaults["log_level"])

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to dictionary."""
        return {
            **{key: getattr(self, key) for key in PARAMETER_KEYS},
            "max_workers": self.max_workers,
            "grid_chunksize": self.grid_chunksize,
            "log_level": self.log_level,
        }

    def parameters(self, n_points: int, **overrides: Any) -> Parameters:
        """
        Engine parameters for a rule size N.

        Overrides (typically CLI flags) win over the file; None means "not given".
        """
        base = Parameters(n_points=int(n_points), **{key: getattr(self, key) for key in PARAMETER_KEYS})
        return base.with_overrides(**overrides)


def get_default_settings() -> Dict[str, Any]:
    """Get default settings dictionary."""
    return {
        "c_ball": 2.0 * math.pi,
        "n_ball": 16,
        "delta_ball": None,  # 1e-3 / (2 max(J - 2, 1))
        "delta_ode": 0.1,
        "delta_coarse": 1e-2,
        "delta_fine": 1e-13,
        "delta_quad": 1e-16,
        "type2_rule": "laguerre",
        "max_trace_steps": 100000,
        "max_newton_iterations": 50,
        "max_workers": 8,
        "grid_chunksize": 8,
        "log_level": "WARNING",
    }


def get_config_path(base_path: Optional[str] = None) -> Path:
    """
    Get the path to the config directory.

    Args:
        base_path: Base application path. If None, uses executable directory or project root.
    """
    if base_path is None:
        if hasattr(sys, '_MEIPASS'):
            base_path = os.path.dirname(sys.executable)
        else:
            from modules.utils.path_utils import get_base_path
            base_path = str(get_base_path())

    return Path(base_path) / "data" / "config"


def load_settings(config_file: str = "settings.json", base_path: Optional[str] = None) -> Settings:
    """
    Load settings from JSON config file.

    An absolute (or existing relative) config_file path is read directly;
    otherwise it is looked up in data/config/. Missing or malformed files
    fall back to defaults with a warning.
    """
    direct = Path(config_file)
    if direct.is_absolute() or (direct.parent != Path(".") and direct.exists()):
        config_path = direct
    else:
        config_path = get_config_path(base_path) / config_file

    if not config_path.exists():
        logger.warning("Settings file %s not found, using defaults", config_path)
        return Settings()

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            settings_dict = json.load(f)
        if not isinstance(settings_dict, dict):
            raise ValueError("top-level JSON value must be an object")
        return Settings(settings_dict)
    except (OSError, ValueError, TypeError) as e:
        logger.warning("Failed to load settings from %s: %s", config_path, e)
        return Settings()
