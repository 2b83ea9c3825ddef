"""Configuration module for the toolflow."""

from streamflow.src.config_package.settings import settings, Settings

__all__ = ["settings", "Settings"]
