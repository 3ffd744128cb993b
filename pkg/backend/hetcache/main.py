"""
hetcache - Main Entry Point

Parses the command line, configures logging, dispatches to the subcommand
handler and maps application exceptions onto process exit codes:
0 success, 1 verification or simulation failure, 2 invalid input,
3 output failure.
"""
import logging
import sys
from typing import List, Optional, TextIO

from hetcache import __version__
from hetcache.api.routes import build_parser
from hetcache.core.exceptions import AppException, handle_app_exception
from hetcache.core.logging import setup_logging


logger = logging.getLogger(__name__)


def main(
    argv: Optional[List[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Run one subcommand and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, force=args.log_level is not None)
    logger.debug(f"hetcache {__version__}: {args.command}")

    try:
        return args.handler(args, stdout)
    except AppException as exc:
        return handle_app_exception(exc, stderr)


if __name__ == "__main__":
    sys.exit(main())
