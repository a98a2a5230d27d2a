from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level knobs read from ``FREEWILL_*`` environment variables."""

    seed_base: int = 0
    jobs: int | None = Field(None, ge=1)
    log_level: str = "INFO"
    model_config = SettingsConfigDict(
        env_prefix="FREEWILL_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


def get_settings() -> Settings:
    # read per call so tests can patch the environment
    return Settings()
