"""
Command Line Module.

Subcommands eval, grid, deformation and bench; see commands.main.
"""

from .commands import main, run_bench, run_deformation, run_eval, run_grid

__all__ = [
    'main',
    'run_eval',
    'run_grid',
    'run_deformation',
    'run_bench',
]
