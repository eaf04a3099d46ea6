"""
Data Loader Module.

Loads settings and phase templates from the data/ folder at runtime,
so they can be updated without rebuilding the executable.
"""

from .data_loader import list_data_files, load_json_config, load_template

__all__ = [
    'list_data_files',
    'load_json_config',
    'load_template',
]
