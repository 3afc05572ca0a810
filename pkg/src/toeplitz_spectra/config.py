"""Carregamento e validação das configurações de execução."""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import yaml

from .counting import DEFAULT_C_ACC, ArcRegion, MembershipMode
from .errors import ConfigError
from .perturbation import (
    DEFAULT_C1,
    DEFAULT_C_PHI,
    DEFAULT_DELTA_0,
    DEFAULT_FOCAL_MARGIN,
    DEFAULT_GATE_OFFSET,
    PerturbationConfig,
)
from .symbol import Case, SymbolParams
from .toeplitz import OperatorSpec

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_PURE_IMAGINARY = re.compile(rf"^(?P<im>[+-]?(?:{_NUMBER})?)i$")
_PURE_REAL = re.compile(rf"^[+-]?{_NUMBER}$")
_FULL = re.compile(rf"^(?P<re>[+-]?{_NUMBER})(?P<im>[+-](?:{_NUMBER})?)i$")


def _imaginary_coefficient(text: str) -> float:
    if text in {"", "+"}:
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_complex(value: Any) -> complex:
    """Converte ``re+imi`` (``1+1i``, ``-0.5i``, ``0.5``, ``1e-3-2i``, ``i``) em ``complex``."""

    if isinstance(value, bool):
        raise ConfigError(f"número complexo inválido: {value!r}")
    if isinstance(value, (int, float, complex)):
        result = complex(value)
    else:
        text = str(value).strip().replace(" ", "")
        if _PURE_REAL.match(text):
            result = complex(float(text), 0.0)
        elif match := _PURE_IMAGINARY.match(text):
            result = complex(0.0, _imaginary_coefficient(match.group("im")))
        elif match := _FULL.match(text):
            result = complex(float(match.group("re")), _imaginary_coefficient(match.group("im")))
        else:
            raise ConfigError(f"número complexo inválido: {value!r} (use a sintaxe re+imi, ex. 1+1i)")
    if not (math.isfinite(result.real) and math.isfinite(result.imag)):
        raise ConfigError(f"número complexo não finito: {value!r}")
    return result


def format_complex(value: complex) -> str:
    """Inversa de :func:`parse_complex` com dígitos suficientes para ida e volta exata."""

    value = complex(value)
    imag = value.imag
    sign = "-" if math.copysign(1.0, imag) < 0 else "+"
    return f"{value.real!r}{sign}{abs(imag)!r}i"


@dataclass
class RunConfig:
    """Parâmetros de uma execução; os nomes espelham as flags da CLI."""

    case: str = "I"
    n: int = 50
    a: complex = 1 + 1j
    b: complex = 0.5 + 0j
    delta: Optional[float] = None
    kappa: Optional[float] = None
    seed: Optional[int] = None
    trials: int = 1
    out: Path = Path("out")
    jobs: int = 1
    samples: int = 1024
    overlay_a: Optional[complex] = None
    n_angles: int = 256
    xi_lo: float = 0.0
    xi_hi: float = 2.0 * math.pi
    r: float = 0.3
    mode: str = MembershipMode.PI_PROJECTION.value
    delta_0: float = DEFAULT_DELTA_0
    c_acc: float = DEFAULT_C_ACC
    c_phi: float = DEFAULT_C_PHI
    c1: float = DEFAULT_C1
    gate_offset: float = DEFAULT_GATE_OFFSET
    focal_margin: float = DEFAULT_FOCAL_MARGIN
    probes: Tuple[complex, ...] = field(default_factory=tuple)
    enforce_gates: bool = True

    def symbol_params(self) -> SymbolParams:
        return SymbolParams(self.a, self.b, Case(self.case))

    def operator_spec(self) -> OperatorSpec:
        return OperatorSpec(self.n, self.symbol_params())

    @property
    def resolved_delta(self) -> float:
        """``delta`` explícito; senão ``N^{−κ}``; senão 0."""

        if self.delta is not None:
            return float(self.delta)
        if self.kappa is not None:
            return float(self.n) ** (-float(self.kappa))
        return 0.0

    def perturbation_config(self) -> PerturbationConfig:
        return PerturbationConfig(
            spec=self.operator_spec(),
            delta=self.resolved_delta,
            kappa=self.kappa,
            master_seed=self.seed or 0,
            trials=self.trials,
        )

    def arc_region(self) -> ArcRegion:
        return ArcRegion(self.xi_lo, self.xi_hi, self.r, MembershipMode(self.mode))

    def to_parameters(self) -> Dict[str, Any]:
        """Parâmetros serializáveis em JSON, na ordem dos campos."""

        values: Dict[str, Any] = {}
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if item.name in _COMPLEX_FIELDS and value is not None:
                value = format_complex(value)
            elif item.name == "probes":
                value = [format_complex(z) for z in value]
            elif item.name == "out":
                value = str(value)
            values[item.name] = value
        return values


_COMPLEX_FIELDS = {"a", "b", "overlay_a"}
_INT_FIELDS = {"n", "seed", "trials", "jobs", "samples", "n_angles"}
_FLOAT_FIELDS = {"delta", "kappa", "xi_lo", "xi_hi", "r", "delta_0", "c_acc", "c_phi", "c1", "gate_offset", "focal_margin"}
FIELD_NAMES = tuple(item.name for item in dataclasses.fields(RunConfig))


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if key in _COMPLEX_FIELDS:
            return parse_complex(value)
        if key in _INT_FIELDS:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(value)
            return int(value)
        if key in _FLOAT_FIELDS:
            result = float(value)
            if not math.isfinite(result):
                raise ValueError(value)
            return result
        if key == "probes":
            items = value if isinstance(value, (list, tuple)) else [value]
            return tuple(parse_complex(item) for item in items)
        if key == "out":
            return Path(value)
        if key == "enforce_gates":
            if not isinstance(value, bool):
                raise ValueError(value)
            return value
        if key == "case":
            return Case(str(value)).value
        if key == "mode":
            return MembershipMode(str(value)).value
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"valor inválido para {key}: {value!r}") from exc
    raise ConfigError(f"chave desconhecida: {key}")


def normalize(values: Mapping[str, Any]) -> Dict[str, Any]:
    """Valida as chaves e converte os valores para os tipos de :class:`RunConfig`."""

    unknown = sorted(set(values) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"chaves desconhecidas na configuração: {', '.join(unknown)}")
    return {key: _coerce(key, value) for key, value in values.items()}


def load_config(path: str | Path) -> Dict[str, Any]:
    """Carrega um arquivo YAML plano (ou um manifesto JSON com a chave ``parameters``)."""

    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise ConfigError(f"não foi possível ler {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"arquivo de configuração inválido {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: esperado um mapeamento chave: valor")
    if isinstance(data.get("parameters"), dict):
        data = data["parameters"]
    return normalize(data)


def build_run_config(*layers: Mapping[str, Any], env_seed: Optional[int] = None) -> RunConfig:
    """Combina camadas em ordem crescente de precedência; valores ``None`` não sobrescrevem."""

    merged: Dict[str, Any] = {}
    for layer in layers:
        merged.update({key: value for key, value in normalize(layer).items() if value is not None})
    if merged.get("seed") is None:
        merged["seed"] = env_seed if env_seed is not None else 0
    if merged["seed"] < 0 or merged["seed"] >= 2**64:
        raise ConfigError(f"semente fora de [0, 2^64): {merged['seed']}")
    return RunConfig(**merged)


__all__ = [
    "FIELD_NAMES",
    "RunConfig",
    "build_run_config",
    "format_complex",
    "load_config",
    "normalize",
    "parse_complex",
]
