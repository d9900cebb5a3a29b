"""
Package cli - Interface en ligne de commande
"""

from .commands import COMMANDS, run_command
from .config import CliConfig, CliError, DataError, FileAccessError, UsageError, build_cli_config

__all__ = [
    'COMMANDS',
    'run_command',
    'CliConfig',
    'CliError',
    'DataError',
    'FileAccessError',
    'UsageError',
    'build_cli_config',
]
