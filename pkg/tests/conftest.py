from __future__ import annotations

import numpy as np
import pytest

from toeplitz_spectra.settings import get_settings
from toeplitz_spectra.symbol import SymbolParams
from toeplitz_spectra.toeplitz import OperatorSpec

FIGURE_A = 1 + 1j
FIGURE_B = 0.5


@pytest.fixture
def params() -> SymbolParams:
    return SymbolParams(FIGURE_A, FIGURE_B)


@pytest.fixture
def make_spec(params):
    def factory(n: int, p: SymbolParams | None = None) -> OperatorSpec:
        return OperatorSpec(n, p or params)

    return factory


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    for name in ("TOEPLITZ_SPECTRA_SEED", "TOEPLITZ_SPECTRA_JOBS", "TOEPLITZ_SPECTRA_PROGRESS", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
