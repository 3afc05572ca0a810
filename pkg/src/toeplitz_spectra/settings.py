"""Definições e utilidades para configuração baseada em variáveis de ambiente."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import ConfigError


def _as_bool(value: str | None, default: bool = False) -> bool:
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "t", "yes", "y", "on"}


def _as_int(name: str, value: str | None) -> Optional[int]:
    if value is None or not value.strip():
        return None
    try:
        return int(value.strip())
    except ValueError as exc:
        raise ConfigError(f"{name} deve ser inteiro, recebido {value!r}") from exc


@dataclass(slots=True)
class Settings:
    """Configurações carregadas a partir de variáveis de ambiente."""

    seed: Optional[int]
    jobs: int
    log_level: str
    progress: bool

    @classmethod
    def from_env(cls) -> "Settings":
        seed = _as_int("TOEPLITZ_SPECTRA_SEED", os.getenv("TOEPLITZ_SPECTRA_SEED"))
        if seed is not None and not 0 <= seed < 2**64:
            raise ConfigError(f"TOEPLITZ_SPECTRA_SEED fora de [0, 2^64): {seed}")
        jobs = _as_int("TOEPLITZ_SPECTRA_JOBS", os.getenv("TOEPLITZ_SPECTRA_JOBS"))

        return cls(
            seed=seed,
            jobs=jobs if jobs is not None else 1,
            log_level=os.getenv("LOG_LEVEL", "WARNING"),
            progress=_as_bool(os.getenv("TOEPLITZ_SPECTRA_PROGRESS"), default=False),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Obtém uma instância cacheada das configurações."""

    return Settings.from_env()


__all__ = ["Settings", "get_settings"]
