"""
Data Loader for JSON configs and phase templates under data/.

Templates and settings live outside the package so they can be edited
without rebuilding the executable.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from modules.utils.log_utils import get_logger
from modules.utils.path_utils import get_data_path

logger = get_logger(__name__)


def load_json_config(config_file: str, subdirectory: str = "config",
                     data_path: Optional[Path] = None) -> Optional[Dict[str, Any]]:
    """
    Load a JSON file from the data directory.

    Args:
        config_file: Name of file (with or without .json extension)
        subdirectory: Subdirectory within data/ (default: "config")
        data_path: Base data path (defaults to get_data_path())

    Returns:
        Parsed JSON object, or None if the file is missing or unreadable
    """
    if data_path is None:
        data_path = get_data_path()

    if not config_file.endswith('.json'):
        config_file = f"{config_file}.json"

    config_path = data_path / subdirectory / config_file
    if not config_path.exists():
        logger.warning("Config file %s not found", config_path)
        return None

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error("Error loading config file %s: %s", config_path, e)
        return None


def load_template(name: str, data_path: Optional[Path] = None) -> Optional[Dict[str, Any]]:
    """Load a phase template definition from data/templates/."""
    return load_json_config(name, subdirectory="templates", data_path=data_path)


def list_data_files(subdirectory: str = "", pattern: str = "*",
                    data_path: Optional[Path] = None) -> List[str]:
    """
    List data files in a subdirectory.

    Args:
        subdirectory: Subdirectory within data/ (empty string for root)
        pattern: File pattern to match (e.g., "*.json")
        data_path: Base data path (defaults to get_data_path())

    Returns:
        Sorted file names matching the pattern
    """
    if data_path is None:
        data_path = get_data_path()

    search_path = data_path / subdirectory if subdirectory else data_path
    if not search_path.exists():
        return []

    return sorted(file.name for file in search_path.glob(pattern) if file.is_file())
