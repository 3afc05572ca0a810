"""Hierarquia de exceções do pacote, mapeada nos códigos de saída da CLI."""

from __future__ import annotations

from typing import Iterable, List


class ToeplitzSpectraError(Exception):
    """Raiz das exceções do pacote."""


class ConfigError(ToeplitzSpectraError, ValueError):
    """Parâmetros, flags ou arquivo de configuração inválidos."""


class RegimeError(ToeplitzSpectraError, ValueError):
    """Operação chamada fora do regime em que está definida."""


class NumericalError(ToeplitzSpectraError, RuntimeError):
    """Falha numérica: não convergência, sistema singular ou resíduo excessivo."""


class GateViolation(ToeplitzSpectraError, ValueError):
    """Hipóteses do teorema violadas; ``violations`` lista cada desigualdade."""

    def __init__(self, violations: Iterable[str]) -> None:
        self.violations: List[str] = list(violations)
        super().__init__("; ".join(self.violations) or "condições do teorema violadas")


__all__ = [
    "ConfigError",
    "GateViolation",
    "NumericalError",
    "RegimeError",
    "ToeplitzSpectraError",
]
