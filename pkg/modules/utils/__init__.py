"""
Utility Functions Module.

Contains helper functions for file paths and logging.
"""

from .log_utils import configure_logging, get_logger
from .path_utils import get_base_path, get_data_path

__all__ = [
    'configure_logging',
    'get_logger',
    'get_base_path',
    'get_data_path',
]
