"""Streaming CNN accelerator design-space exploration."""

__version__ = "0.1.0"
