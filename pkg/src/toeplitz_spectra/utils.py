"""Funções utilitárias gerais: logging, escrita de artefatos e manifesto."""

from __future__ import annotations

import hashlib
import json
import logging
import logging.config
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping

import numpy as np
import pandas as pd
from pythonjsonlogger import jsonlogger

from .config import format_complex

LOGGER = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def configure_logging(level: str) -> None:
    """Logs JSON em stderr para o logger do pacote; stdout fica livre para resultados."""

    level = level.upper()
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "json": {
                    "()": jsonlogger.JsonFormatter,
                    "fmt": "%(asctime)s %(name)s %(levelname)s %(message)s",
                }
            },
            "handlers": {
                "stderr": {
                    "class": "logging.StreamHandler",
                    "stream": "ext://sys.stderr",
                    "formatter": "json",
                }
            },
            "loggers": {
                "toeplitz_spectra": {
                    "handlers": ["stderr"],
                    "level": level,
                    "propagate": False,
                },
            },
        }
    )


def to_jsonable(value: Any) -> Any:
    """Converte complexos, tipos numpy, enums e caminhos em valores JSON."""

    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(complex(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    return value


def dumps_json(data: Any) -> str:
    return json.dumps(to_jsonable(data), ensure_ascii=False, indent=2) + "\n"


def write_json(data: Any, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_json(data))
    return path


def write_csv(columns: Mapping[str, Any], path: Path) -> Path:
    """Grava colunas em CSV com 17 dígitos significativos e terminação ``\\n``."""

    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({name: np.asarray(values) for name, values in columns.items()})
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path


def write_text(text: str, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def sha256_file(path: Path, chunk_size: int = 1 << 16) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir: Path,
    command: str,
    version: str,
    parameters: Mapping[str, Any],
    artifacts: Mapping[str, Path],
    extra: Mapping[str, Any] | None = None,
) -> Path:
    """Grava ``manifest.json`` com parâmetros, semente e o SHA-256 de cada artefato."""

    manifest: Dict[str, Any] = {
        "command": command,
        "version": version,
        "seed": parameters.get("seed"),
        "parameters": dict(parameters),
        "artifacts": {name: sha256_file(path) for name, path in sorted(artifacts.items())},
    }
    if extra:
        manifest.update(extra)
    path = write_json(manifest, out_dir / "manifest.json")
    LOGGER.info("manifesto gravado", extra={"path": str(path), "artifacts": len(artifacts)})
    return path


__all__ = [
    "configure_logging",
    "dumps_json",
    "sha256_file",
    "to_jsonable",
    "write_csv",
    "write_json",
    "write_manifest",
    "write_text",
]
