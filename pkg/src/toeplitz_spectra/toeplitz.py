"""Operadores de Toeplitz bidiagonais não perturbados ``P_I`` e ``P_II``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ConfigError
from .grushin import F_geom
from .numerics import as_square_matrix, hermitian_extreme_eigpair, smallest_singular_value
from .symbol import Case, SymbolParams, require_case, char_roots_I


@dataclass(frozen=True)
class OperatorSpec:
    """Dimensão ``N`` e parâmetros do símbolo de uma matriz ``N×N``."""

    n: int
    params: SymbolParams

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"N deve ser inteiro ≥ 1, recebido {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def case(self) -> Case:
        return self.params.case

    @property
    def a(self) -> complex:
        return self.params.a

    @property
    def b(self) -> complex:
        return self.params.b


def build_P(spec: OperatorSpec) -> np.ndarray:
    """Matriz densa: ``a`` na superdiagonal e ``b`` na subdiagonal (caso I) ou na segunda superdiagonal (caso II)."""

    n = spec.n
    matrix = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n - 1)
    matrix[idx, idx + 1] = spec.a
    if spec.case is Case.I:
        matrix[idx + 1, idx] = spec.b
    else:
        idx2 = np.arange(n - 2)
        matrix[idx2, idx2 + 2] = spec.b
    return matrix


def exact_spectrum_I(spec: OperatorSpec) -> np.ndarray:
    """``2√(ab)·cos(πν/(N+1))``, ``ν = 1..N``."""

    require_case(spec.params, Case.I)
    nu = np.arange(1, spec.n + 1)
    return spec.params.focal_point * np.cos(np.pi * nu / (spec.n + 1))


def log_det_closed_form(z: complex, spec: OperatorSpec) -> Tuple[float, complex]:
    """``(ln|det(P−z)|, fase)`` pela forma ``(−a)^N ζ₋^N F_{N+1}(ζ₊/ζ₋)``, em coordenadas log-polares."""

    require_case(spec.params, Case.I)
    roots = char_roots_I(z, spec.params)
    n = spec.n
    geometric = F_geom(n + 1, roots.ratio)
    if geometric == 0:
        return float("-inf"), 0j
    minus_a = -spec.a
    log_abs = n * math.log(abs(minus_a)) + n * math.log(abs(roots.zeta_minus)) + math.log(abs(geometric))
    angle = n * cmath.phase(minus_a) + n * cmath.phase(roots.zeta_minus) + cmath.phase(geometric)
    return log_abs, cmath.exp(1j * angle)


def det_closed_form(z: complex, spec: OperatorSpec) -> complex:
    log_abs, phase = log_det_closed_form(z, spec)
    if log_abs == float("-inf"):
        return 0j
    return phase * math.exp(log_abs)


def det_mirror_form(z: complex, spec: OperatorSpec) -> complex:
    """Forma espelhada ``(−b)^N (ζ₊^{−(N+1)} − ζ₋^{−(N+1)})/(ζ₊^{−1} − ζ₋^{−1})``."""

    require_case(spec.params, Case.I)
    roots = char_roots_I(z, spec.params)
    n = spec.n
    geometric = F_geom(n + 1, roots.ratio)
    if geometric == 0:
        return 0j
    minus_b = -spec.b
    log_abs = n * math.log(abs(minus_b)) - n * math.log(abs(roots.zeta_plus)) + math.log(abs(geometric))
    angle = n * cmath.phase(minus_b) - n * cmath.phase(roots.zeta_plus) + cmath.phase(geometric)
    return cmath.exp(1j * angle) * math.exp(log_abs)


def symmetrized_form(spec: OperatorSpec) -> np.ndarray:
    """``√(ab)·T_N`` com ``T_N`` tridiagonal de zeros e uns."""

    require_case(spec.params, Case.I)
    n = spec.n
    ones = np.ones(n - 1)
    tridiagonal = np.diag(ones, 1) + np.diag(ones, -1)
    return spec.params.sqrt_ab * tridiagonal.astype(np.complex128)


def similarity_transform(spec: OperatorSpec) -> np.ndarray:
    """``W·P·W⁻¹`` com ``W = diag(w^k)``, ``w = (a/b)^{1/2}``, calculado entrada a entrada."""

    require_case(spec.params, Case.I)
    matrix = build_P(spec)
    log_w = cmath.log(cmath.sqrt(spec.a / spec.b))
    rows, cols = np.nonzero(matrix)
    scaled = np.zeros_like(matrix)
    scaled[rows, cols] = matrix[rows, cols] * np.exp((rows - cols) * log_w)
    return scaled


def numerical_range_boundary(operator: OperatorSpec | np.ndarray, n_angles: int) -> np.ndarray:
    """Pontos da fronteira da imagem numérica pelo método dos hiperplanos suporte.

    Para cada ``θ = 2πk/n_angles`` toma o autovetor dominante ``u_θ`` da parte
    hermitiana de ``e^{−iθ}P`` e devolve ``(Pu_θ | u_θ)``.
    """

    if n_angles < 3:
        raise ConfigError(f"n_angles deve ser ≥ 3, recebido {n_angles}")
    matrix = build_P(operator) if isinstance(operator, OperatorSpec) else as_square_matrix(operator)
    points = np.empty(n_angles, dtype=np.complex128)
    for k in range(n_angles):
        rotated = np.exp(-2j * np.pi * k / n_angles) * matrix
        hermitian = 0.5 * (rotated + rotated.conj().T)
        _, vector = hermitian_extreme_eigpair(hermitian)
        points[k] = np.vdot(vector, matrix @ vector)
    return points


def resolvent_norm(z: complex, spec: OperatorSpec) -> float:
    """``‖(P − z)⁻¹‖`` pelo menor valor singular."""

    shifted = build_P(spec) - complex(z) * np.eye(spec.n)
    sigma = smallest_singular_value(shifted)
    return float("inf") if sigma == 0 else 1.0 / sigma


__all__ = [
    "OperatorSpec",
    "build_P",
    "det_closed_form",
    "det_mirror_form",
    "exact_spectrum_I",
    "log_det_closed_form",
    "numerical_range_boundary",
    "resolvent_norm",
    "similarity_transform",
    "symmetrized_form",
]
