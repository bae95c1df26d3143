"""Runtime settings loaded from the environment or a .env file."""
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class Settings(BaseModel):
    """Defaults for the CLI; every field can be overridden by a flag."""
    log_level: str = "INFO"
    log_dir: Optional[str] = None
    restarts: int = Field(default=20, ge=1)
    seed: int = 7
    trials: int = Field(default=100, ge=1)


def load_settings(env_file: Optional[str] = None) -> Settings:
    """
    Build Settings from PCOH_* environment variables.

    Args:
        env_file: Optional path to a .env file; the default search is used otherwise

    Returns:
        Settings with unset variables left at their defaults
    """
    load_dotenv(env_file)

    values = {}
    mapping = {
        "PCOH_LOG_LEVEL": "log_level",
        "PCOH_LOG_DIR": "log_dir",
        "PCOH_RESTARTS": "restarts",
        "PCOH_SEED": "seed",
        "PCOH_TRIALS": "trials",
    }
    for env_name, field in mapping.items():
        raw = os.getenv(env_name)
        if raw not in (None, ""):
            values[field] = raw

    return Settings(**values)
