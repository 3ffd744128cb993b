"""
hetcache - Heterogeneous-Profile Coded Caching

This package implements coded caching for users split into groups that share
a library of common files and own group-specific unique files: the split
placement and XOR delivery scheme with bit-exact simulation, the genie-aided
converse under uncoded placement, and the gap analysis between the two.
"""

__version__ = "0.1.0"
__author__ = "hetcache developers"

# Package-level constants
APP_NAME = "hetcache"

# Make key components available at package level
from hetcache.core.config import settings  # noqa
