"""
Lesion detection toolkit main module.

This is the main entry point for the toolkit. It provides the command-line
interface for phantom generation, preprocessing, patch sampling,
augmentation, topology planning, detection, stitching, ensembling and FROC
evaluation, and for full pipeline runs.
"""

# Standard library imports
import argparse
import json
import logging
import os
import sys

# Ensure that the root project directory is in the Python path.  This
# supports running the toolkit from a variety of execution contexts
# without relying on package-level path manipulation.
SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))
if SCRIPT_DIR not in sys.path:
    sys.path.insert(0, SCRIPT_DIR)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _report_error(args, message):
    if args.json:
        payload = {"status": "error", "message": message}
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"Error: {message}", file=sys.stderr)


def main(argv=None):
    """
    Run one toolkit subcommand.

    Parameters:
        argv (list): Arguments without the program name; ``None`` reads
            ``sys.argv``.

    Returns:
        int: 0 on success, 1 when the command failed, 2 for usage errors.
    """
    from utilities.command.handlers import COMMAND_HANDLERS
    from utilities.command.parser import build_parser
    from utilities.errors import ToolkitError
    from utilities.log_utils import configure_logging

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    # Set up logging with user-specified level
    log_level = getattr(logging, args.log_level)
    logger = configure_logging(log_file=args.log_file, level=log_level)
    logger.info(f"Running command '{args.command}'")

    handler = COMMAND_HANDLERS[args.command]
    try:
        result, lines = handler(args)
    except (ToolkitError, ValueError, OSError, argparse.ArgumentTypeError) as e:
        logger.error(f"Command '{args.command}' failed: {e}", exc_info=True)
        _report_error(args, str(e))
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"Unexpected error in main: {e}", exc_info=True)
        _report_error(args, f"unexpected error: {e}")
        return EXIT_ERROR

    if args.json:
        print(json.dumps({"status": "ok", **result}, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
