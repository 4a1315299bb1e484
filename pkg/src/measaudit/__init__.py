"""Auditing learned regression models used as measurement instruments."""

__version__ = "0.1.0"
