"""
Toolkit configuration loaded from environment variables and an optional .env file.
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToolkitSettings(BaseSettings):
    """Runtime settings; every field can be overridden with a TROPICAL_* variable."""

    log_level: str = Field("WARNING", description="Level for the stderr log handler")
    det_max_order: int = Field(
        10, ge=1, le=12, description="Largest order enumerated by permutation-based routines"
    )
    seed: int = Field(20240521, description="Seed for every sampling random generator")
    sample_count: int = Field(25, ge=1, description="Random module points drawn when none are given")
    json_indent: int = Field(2, ge=0)

    model_config = SettingsConfigDict(
        env_prefix="TROPICAL_",
        env_file=".env",
        extra="ignore",  # Ignore extra fields
    )


# Global settings instance
_settings: Optional[ToolkitSettings] = None


def get_settings() -> ToolkitSettings:
    """Get or create the global settings instance."""
    global _settings
    if _settings is None:
        _settings = ToolkitSettings()
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next access re-reads the environment."""
    global _settings
    _settings = None
