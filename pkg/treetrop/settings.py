from __future__ import annotations

from functools import lru_cache
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DeterminantMethod = Literal["auto", "permutation", "laplace", "berkowitz"]


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="TREETROP_", case_sensitive=False, extra="ignore")

    app_name: str = "treetrop"
    workers: int = Field(1, ge=1)
    default_seed: int = 0
    retry_budget: int = Field(3, ge=0)
    coefficient_bound: int = Field(10**6, ge=2)
    determinant_method: DeterminantMethod = "auto"
    permutation_limit: int = Field(6, ge=1)
    log_level: str = "WARNING"
    json_indent: int = Field(2, ge=0)

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, value: str) -> str:
        return str(value).strip().upper()


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
