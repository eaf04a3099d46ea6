"""
Main Launcher Script for nsdquad.

Entry point for both development (script) and production (exe) modes.

The launcher:
1. Puts the project root on sys.path when running as a script
2. Hands the command line to modules.cli.commands.main, which loads
   settings from data/config/ and dispatches the subcommand
"""

import sys
from multiprocessing import freeze_support
from pathlib import Path

# Add modules to path if running as script (not from exe)
if not hasattr(sys, '_MEIPASS'):
    project_root = Path(__file__).parent
    sys.path.insert(0, str(project_root))

from modules.cli.commands import main


if __name__ == "__main__":
    # Pool workers in a frozen executable re-enter here
    freeze_support()
    sys.exit(main())
