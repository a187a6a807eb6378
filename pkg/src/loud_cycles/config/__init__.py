"""Configuration and settings management modules."""

from .settings import CycleSettings, load_settings, settings

__all__ = ["CycleSettings", "load_settings", "settings"]
