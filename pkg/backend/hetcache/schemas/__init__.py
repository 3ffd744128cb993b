"""
hetcache - Schemas

Pydantic models shared by the services and the command-line front end.
"""
