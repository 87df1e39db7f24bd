"""Configuration loading"""

from concord.infrastructure.config.config_manager import ConfigManager, ConfigurationError

__all__ = ["ConfigManager", "ConfigurationError"]
