"""
hetcache - Core Module

Components shared by every service:
- Configuration and settings management
- Logging configuration
- Exception hierarchy and the exit-code handler
"""
