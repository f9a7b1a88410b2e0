"""
Command utilities package.

This package holds the argument parser, the subcommand handlers and the
extended help texts of the toolkit CLI.
"""

from utilities.command.help_topics import get_extended_help
from utilities.command.parser import build_parser, parse_numbers

__all__ = ["build_parser", "parse_numbers", "get_extended_help"]
