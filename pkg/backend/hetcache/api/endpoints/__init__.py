"""
hetcache - Subcommand Handlers

Each module registers one subcommand and exposes ``run(args, stdout) -> int``.
"""
