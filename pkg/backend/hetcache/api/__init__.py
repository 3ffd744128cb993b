"""
hetcache - Command Line API

Subcommand parsers live in ``routes``; each subcommand handler lives in its
own module under ``endpoints``.
"""
