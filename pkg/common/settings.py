"""
Process-level runtime settings read from the environment.
"""

from typing import Optional

from pydantic_settings import BaseSettings

from common.constants import LoggingConstants


class UsvSettings(BaseSettings):
    """Runtime settings (``USV_*`` environment variables or ``.env``)."""

    # Logging
    log_level: str = LoggingConstants.DEFAULT_LOG_LEVEL
    log_format: str = LoggingConstants.DEFAULT_LOG_FORMAT

    # Runs
    config_path: Optional[str] = None
    output_dir: str = "runs"
    workers: int = 1

    model_config = {"env_file": ".env", "env_prefix": "USV_", "extra": "ignore"}


def get_settings() -> UsvSettings:
    return UsvSettings()
