"""
Configuration Module.

This module handles application settings and user-facing strings.
All configuration data should be external and loadable from the data/ folder.
"""

from .strings import MESSAGES, Strings, get_strings, t
from .settings import PARAMETER_KEYS, Settings, get_config_path, get_default_settings, load_settings

__all__ = [
    'MESSAGES',
    'Strings',
    'get_strings',
    't',
    'PARAMETER_KEYS',
    'Settings',
    'get_config_path',
    'get_default_settings',
    'load_settings',
]
