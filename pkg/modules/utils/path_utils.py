"""
Path utility functions for locating the data directory and its resources.

These functions handle both development (script) and production (PyInstaller exe) modes.
"""

import os
import sys
from pathlib import Path


def get_base_path() -> Path:
    """
    Get the base application path.

    In PyInstaller bundle: Returns directory containing the executable
    In script mode: Returns the project root directory
    """
    if hasattr(sys, '_MEIPASS'):
        return Path(os.path.dirname(sys.executable))
    # modules/utils/path_utils.py -> project root
    return Path(__file__).resolve().parent.parent.parent


def get_data_path() -> Path:
    """
    Get the path to the data directory.

    Data directory contains config/ (settings) and templates/ (phase templates).
    """
    return get_base_path() / "data"
