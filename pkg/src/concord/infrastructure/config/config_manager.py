"""Configuration manager for loading and validating .concord.yml"""

import logging
from pathlib import Path
from typing import Any, Optional, Union

import yaml
from pydantic import ValidationError

from concord.domain.config import (
    AppConfig,
    BatchConfig,
    IntegratorConfig,
    NumericsConfig,
    OutputConfig,
)

logger = logging.getLogger(__name__)

CONFIG_FILE_NAME = ".concord.yml"


class ConfigurationError(Exception):
    """Configuration validation error."""

    pass


class ConfigManager:
    """Manages configuration from .concord.yml

    Loads configuration with validation using Pydantic models. Configuration priority:
    1. Default values (defined in Pydantic models)
    2. .concord.yml file (searched from current directory upward)
    3. Scenario documents (applied per run by the scenario loader)
    """

    config_path: Optional[Path]
    config: AppConfig

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """Initialize config manager

        Args:
            config_path: Path to .concord.yml (searches from current dir if None)

        Raises:
            ConfigurationError: If the file cannot be parsed or fails validation
        """
        if isinstance(config_path, str):
            config_path = Path(config_path)
        self.config_path = config_path or self._find_config_file()
        try:
            self.config: AppConfig = self._load_config()
        except ValidationError as e:
            errors = []
            for error in e.errors():
                field = ".".join(str(x) for x in error["loc"])
                msg = error["msg"]
                errors.append(f"  - {field}: {msg}")
            raise ConfigurationError(
                "Configuration validation failed:\n" + "\n".join(errors)
            ) from e

    def _find_config_file(self) -> Optional[Path]:
        """Find .concord.yml starting from current directory

        Returns:
            Path to config file or None if not found
        """
        current = Path.cwd()
        for parent in [current] + list(current.parents):
            config_file = parent / CONFIG_FILE_NAME
            if config_file.exists():
                logger.info(f"Found config file: {config_file}")
                return config_file
        logger.debug(f"No {CONFIG_FILE_NAME} found, using defaults")
        return None

    def _load_config(self) -> AppConfig:
        """Load configuration from file and validate with Pydantic

        Returns:
            Validated AppConfig instance

        Raises:
            ValidationError: If configuration is invalid
            ConfigurationError: If the file is not a YAML mapping
        """
        config_dict: dict[str, Any] = {}

        if self.config_path and self.config_path.exists():
            try:
                with open(self.config_path, "r", encoding="utf-8") as f:
                    config_dict = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ConfigurationError(f"Cannot parse {self.config_path}: {e}") from e
            if not isinstance(config_dict, dict):
                raise ConfigurationError(f"{self.config_path} must contain a mapping")
            logger.info(f"Loaded configuration from {self.config_path}")

        return AppConfig(**config_dict)

    def get_integrator_config(self) -> IntegratorConfig:
        """Get default integrator configuration

        Returns:
            Integrator configuration model
        """
        return self.config.integrator

    def get_numerics_config(self) -> NumericsConfig:
        """Get numerical tolerances

        Returns:
            Numerics configuration model
        """
        return self.config.numerics

    def get_output_config(self) -> OutputConfig:
        return self.config.output

    def get_batch_config(self) -> BatchConfig:
        return self.config.batch

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key (supports dot notation)

        Args:
            key: Configuration key (e.g., "integrator.step" or "integrator")
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        keys = key.split(".")
        value = self.config.model_dump()
        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value
