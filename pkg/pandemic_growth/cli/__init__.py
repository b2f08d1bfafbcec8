"""
Command-line domain - argument parsing and the subcommand handlers.
"""

from .parser import build_parser, config_overrides
from .commands import (
    EXIT_DATA_ERROR, EXIT_FAILURE, EXIT_OK, EXIT_WARNINGS, HANDLERS, load_config, run_command,
)

__all__ = [
    "build_parser", "config_overrides",
    "EXIT_DATA_ERROR", "EXIT_FAILURE", "EXIT_OK", "EXIT_WARNINGS", "HANDLERS", "load_config", "run_command",
]
