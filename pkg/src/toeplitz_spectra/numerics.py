"""Núcleo numérico: matrizes complexas densas, autovalores, determinantes e sorteios reprodutíveis."""

from __future__ import annotations

import logging
import warnings
from typing import Iterable, Tuple

import numpy as np
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from .errors import ConfigError, NumericalError, RegimeError

LOGGER = logging.getLogger(__name__)

EIG_TOLERANCE = 1e-8
SOLVE_RESIDUAL_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12
# limite de log10 do fator de escala diagonal usado no balanceamento tridiagonal
_MAX_LOG10_SCALING = 150.0


class RngStream:
    """Fluxo pseudoaleatório determinístico identificado por ``(master_seed, stream_index)``.

    Usa o gerador contador Philox sobre uma ``SeedSequence`` com ``spawn_key``
    igual ao índice do fluxo: fluxos distintos são independentes e o mesmo par
    gera sempre a mesma sequência, em qualquer plataforma.
    """

    def __init__(self, master_seed: int, stream_index: int = 0) -> None:
        if int(master_seed) < 0 or int(stream_index) < 0:
            raise ConfigError(
                f"semente e índice do fluxo devem ser não negativos: ({master_seed}, {stream_index})"
            )
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        sequence = np.random.SeedSequence(entropy=self.master_seed, spawn_key=(self.stream_index,))
        self._generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"

    def complex_gaussian(self, size: int | Tuple[int, ...] | None = None) -> np.ndarray | complex:
        """Amostras com densidade π⁻¹e^{−|q|²}: partes real e imaginária N(0, 1/2)."""

        scale = np.sqrt(0.5)
        real = self._generator.standard_normal(size)
        imag = self._generator.standard_normal(size)
        values = (real + 1j * imag) * scale
        if size is None:
            return complex(values)
        return values.astype(np.complex128, copy=False)


def complex_gaussian_sample(stream: RngStream) -> complex:
    """Uma amostra gaussiana complexa padrão (E|q|² = 1)."""

    return stream.complex_gaussian()


def as_square_matrix(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigError(f"matriz quadrada esperada, recebido formato {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfigError("matriz com entradas não finitas")
    return m


def is_tridiagonal(matrix: np.ndarray) -> bool:
    m = np.asarray(matrix)
    n = m.shape[0]
    if n < 3:
        return True
    band = np.triu(np.tril(m, 1), -1)
    return bool(np.array_equal(band, m))


def _tridiagonal_balance(m: np.ndarray) -> np.ndarray | None:
    """Similaridade diagonal que iguala os módulos das duas diagonais secundárias.

    Retorna ``None`` quando alguma diagonal secundária tem zeros ou quando o
    fator de escala sairia da faixa representável.
    """

    n = m.shape[0]
    upper = np.diag(m, 1)
    lower = np.diag(m, -1)
    if np.any(upper == 0) or np.any(lower == 0):
        return None
    log_ratio = 0.5 * (np.log(np.abs(upper)) - np.log(np.abs(lower)))
    log_d = np.concatenate(([0.0], np.cumsum(log_ratio)))
    if np.ptp(log_d) / np.log(10.0) > _MAX_LOG10_SCALING:
        return None
    balanced = np.zeros_like(m)
    idx = np.arange(n)
    balanced[idx, idx] = np.diag(m)
    balanced[idx[:-1], idx[1:]] = upper * np.exp(log_d[:-1] - log_d[1:])
    balanced[idx[1:], idx[:-1]] = lower * np.exp(log_d[1:] - log_d[:-1])
    return balanced


def eig(matrix: np.ndarray, *, balance: str = "auto", verify: bool = False) -> np.ndarray:
    """Autovalores (com multiplicidade) via redução de Hessenberg e QR deslocado (LAPACK).

    ``balance="auto"`` aplica, a matrizes tridiagonais, a similaridade diagonal que
    simetriza os módulos das diagonais secundárias antes do QR; ``"none"`` entrega a
    matriz sem alteração ao LAPACK. Com ``verify=True`` cada autovalor é conferido
    pelo menor valor singular de ``M − λI``.
    """

    m = as_square_matrix(matrix)
    n = m.shape[0]
    if n == 0:
        raise ConfigError("dimensão deve ser ≥ 1")
    if balance not in {"auto", "none"}:
        raise ConfigError(f"modo de balanceamento desconhecido: {balance}")

    work = m
    if balance == "auto" and n >= 2 and is_tridiagonal(m):
        balanced = _tridiagonal_balance(m)
        if balanced is not None:
            work = balanced

    try:
        values = linalg.eigvals(work, check_finite=False)
    except linalg.LinAlgError as exc:
        LOGGER.error("QR não convergiu", extra={"n": n})
        raise NumericalError(f"autovalores não convergiram (n={n}): {exc}") from exc

    if values.shape[0] != n or not np.all(np.isfinite(values)):
        raise NumericalError(f"eigensolver devolveu {values.shape[0]} valores para n={n}")

    if verify:
        scale = operator_norm(m)
        identity = np.eye(n, dtype=np.complex128)
        for value in values:
            residual = smallest_singular_value(m - value * identity)
            if residual > EIG_TOLERANCE * max(scale, np.finfo(float).tiny):
                raise NumericalError(
                    f"autovalor {value} com resíduo {residual:.3e} acima de {EIG_TOLERANCE}·‖M‖"
                )
    return values.astype(np.complex128, copy=False)


def log_det(matrix: np.ndarray) -> Tuple[complex, float]:
    """Par ``(fase, ln|det M|)`` acumulado sobre os pivôs da fatoração LU com pivoteamento."""

    m = as_square_matrix(matrix)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0.0j, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(m, check_finite=False)
    pivots = np.diag(lu)
    moduli = np.abs(pivots)
    if np.any(moduli == 0.0):
        return 0.0 + 0.0j, float("-inf")
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    angle = float(np.sum(np.angle(pivots))) + np.pi * (swaps % 2)
    return complex(np.exp(1j * angle)), float(np.sum(np.log(moduli)))


def log_abs_det(matrix: np.ndarray) -> float:
    """ln|det M|; devolve −∞ para matriz singular."""

    return log_det(matrix)[1]


def is_lower_triangular(matrix: np.ndarray) -> bool:
    return not np.any(np.triu(matrix, 1))


def solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Resolve ``M X = rhs``; sistemas triangulares inferiores usam substituição direta."""

    m = as_square_matrix(matrix)
    b = np.asarray(rhs, dtype=np.complex128)
    n = m.shape[0]
    if b.shape[0] != n:
        raise ConfigError(f"lado direito com {b.shape[0]} linhas para matriz {n}×{n}")

    triangular = is_lower_triangular(m)
    if triangular:
        pivots = np.abs(np.diag(m))
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", linalg.LinAlgWarning)
            lu, piv = linalg.lu_factor(m, check_finite=False)
        pivots = np.abs(np.diag(lu))

    largest = float(pivots.max()) if n else 0.0
    if n and float(pivots.min()) <= n * np.finfo(float).eps * largest:
        raise NumericalError(f"matriz numericamente singular (n={n})")

    if triangular:
        x = linalg.solve_triangular(m, b, lower=True, check_finite=False)
    else:
        x = linalg.lu_solve((lu, piv), b, check_finite=False)

    if not np.all(np.isfinite(x)):
        raise NumericalError("solução com entradas não finitas")
    residual = np.linalg.norm(m @ x - b)
    if residual > SOLVE_RESIDUAL_TOLERANCE * np.linalg.norm(m) * np.linalg.norm(x):
        raise NumericalError(f"resíduo {residual:.3e} acima da tolerância; sistema mal condicionado")
    return x


def hermitian_extreme_eigpair(matrix: np.ndarray) -> Tuple[float, np.ndarray]:
    """Maior autovalor de uma matriz hermitiana e um autovetor unitário de fase normalizada."""

    h = as_square_matrix(matrix)
    scale = np.linalg.norm(h)
    if np.linalg.norm(h - h.conj().T) > HERMITIAN_TOLERANCE * max(scale, np.finfo(float).tiny):
        raise RegimeError("matriz não hermitiana")
    n = h.shape[0]
    h = 0.5 * (h + h.conj().T)
    values, vectors = linalg.eigh(h, subset_by_index=[n - 1, n - 1], check_finite=False)
    vector = vectors[:, 0]
    pivot = vector[np.argmax(np.abs(vector))]
    vector = vector * (abs(pivot) / pivot)
    return float(values[0]), vector / np.linalg.norm(vector)


def hs_norm(matrix: np.ndarray) -> float:
    """Norma de Hilbert–Schmidt (Frobenius)."""

    return float(np.linalg.norm(matrix))


def operator_norm(matrix: np.ndarray) -> float:
    m = np.asarray(matrix)
    if m.size == 0:
        return 0.0
    return float(linalg.svdvals(m, check_finite=False)[0])


def trace_norm(matrix: np.ndarray) -> float:
    return float(np.sum(linalg.svdvals(np.asarray(matrix), check_finite=False)))


def smallest_singular_value(matrix: np.ndarray) -> float:
    return float(linalg.svdvals(np.asarray(matrix), check_finite=False)[-1])


def pairing_distance(first: Iterable[complex], second: Iterable[complex]) -> float:
    """Maior distância no emparelhamento ótimo um-a-um entre dois multiconjuntos."""

    xs = np.asarray(list(first), dtype=np.complex128)
    ys = np.asarray(list(second), dtype=np.complex128)
    if xs.shape != ys.shape:
        raise ConfigError(f"multiconjuntos de tamanhos diferentes: {xs.size} e {ys.size}")
    if xs.size == 0:
        return 0.0
    cost = np.abs(xs[:, None] - ys[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


__all__ = [
    "EIG_TOLERANCE",
    "as_square_matrix",
    "RngStream",
    "complex_gaussian_sample",
    "eig",
    "hermitian_extreme_eigpair",
    "hs_norm",
    "is_lower_triangular",
    "is_tridiagonal",
    "log_abs_det",
    "log_det",
    "operator_norm",
    "pairing_distance",
    "smallest_singular_value",
    "solve",
    "trace_norm",
]
