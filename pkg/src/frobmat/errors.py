"""Shared exception types."""

from __future__ import annotations


class LimitExceeded(RuntimeError):
    """An enumeration would exceed its configured cap."""


class RecoveryError(ValueError):
    """Partition recovery input violates a required hypothesis."""
