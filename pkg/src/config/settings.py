"""
Environment settings
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level settings with environment variable support"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # =====================
    # Feature Cache
    # =====================
    cache_dir: Optional[Path] = Field(default=None, validation_alias="MOODNET_CACHE")

    # =====================
    # I/O
    # =====================
    io_retries: int = Field(default=3, ge=1, validation_alias="MOODNET_IO_RETRIES")

    # =====================
    # Logging Settings
    # =====================
    log_level: str = Field(default="INFO", validation_alias="MOODNET_LOG_LEVEL")
    log_format: Literal["console", "json"] = Field(default="console", validation_alias="MOODNET_LOG_FORMAT")
    log_file: Optional[str] = Field(default=None, validation_alias="MOODNET_LOG_FILE")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level"""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        vv = (v or "").upper()
        if vv not in valid_levels:
            raise ValueError(f"log_level must be one of {sorted(valid_levels)}")
        return vv


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings are read once per process; tests clear the cache after patching env."""
    return Settings()
