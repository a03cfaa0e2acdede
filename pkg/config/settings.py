from __future__ import annotations

from pathlib import Path
from typing import Any

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def _project_root() -> Path:
    return Path(__file__).resolve().parents[1]


BASE_DIR = _project_root()
ENV_LOCAL = BASE_DIR / ".env.local"
ENV = BASE_DIR / ".env"


def _load_env_files() -> None:
    # .env.local перекрывает .env; уже выставленные переменные окружения не трогаем
    for env_path in (ENV_LOCAL, ENV):
        if env_path.exists():
            load_dotenv(env_path, override=False, encoding="utf-8-sig")


_load_env_files()


class Settings(BaseSettings):
    """Настройки iri (читаются из окружения, .env.local и .env)."""

    model_config = SettingsConfigDict(
        env_file=(
            str(ENV_LOCAL),
            str(ENV),
        ),
        env_file_encoding="utf-8-sig",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    # Corpus
    corpus_dir: Path = Field(BASE_DIR / "corpus", alias="IRI_CORPUS_DIR")

    # Logs
    logs_dir: Path = Field(BASE_DIR / "logs", alias="LOGS_DIR")
    log_level: str = Field("WARNING", alias="LOG_LEVEL")
    log_to_file: bool = Field(False, alias="LOG_TO_FILE")

    # Search
    jobs: int = Field(1, alias="IRI_JOBS")
    chunk_frames: int = Field(4096, alias="IRI_CHUNK_FRAMES")
    sweep_warn_limit: int = Field(10**8, alias="IRI_SWEEP_WARN_LIMIT")

    # Proofs
    taut_atom_limit: int = Field(20, alias="IRI_TAUT_ATOM_LIMIT")

    @field_validator("jobs", "chunk_frames", "taut_atom_limit", mode="before")
    @classmethod
    def _at_least_one(cls, v: Any) -> int:
        try:
            n = int(v)
        except (TypeError, ValueError):
            return 1
        return max(1, n)

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper_level(cls, v: Any) -> str:
        s = str(v or "").strip().upper()
        return s or "WARNING"


def load_settings() -> Settings:
    return Settings()
