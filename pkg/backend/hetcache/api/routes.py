"""
hetcache - Command Routes

Builds the top-level argument parser and attaches every subcommand. Shared
flags live on a parent parser so each subcommand accepts them.
"""
import argparse

from hetcache import APP_NAME, __version__
from hetcache.api.endpoints import achievable, bound, simulate, sweep, verify
from hetcache.core.config import VALID_LOG_LEVELS


def _u64(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return seed


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="Scenario JSON file")
    common.add_argument("--out", default=None, help="Output file (CSV for sweep, JSON otherwise)")
    common.add_argument("--seed", type=_u64, default=None, help="Library seed (unsigned 64-bit)")
    common.add_argument("--beta", type=float, default=None, help="Memory split for simulate and verify")
    common.add_argument(
        "--log-level", type=str.lower, choices=VALID_LOG_LEVELS, default=None,
        help="Override HETCACHE_LOG_LEVEL",
    )

    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Coded caching with common and group-unique files: bounds, simulation, gap analysis",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for endpoint in (bound, achievable, sweep, simulate, verify):
        endpoint.register(subparsers, [common])
    return parser
