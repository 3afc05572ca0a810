"""Problema de Grushin do operador não perturbado e construção explícita do resolvente.

Convenção de índices do sistema aumentado ``𝒫(z)`` (matriz ``(N+1)×(N+1)``
triangular inferior): as linhas ``1..N`` e colunas ``0..N−1`` formam ``P − z``,
a linha ``0`` é ``R₊`` e a coluna ``N`` é ``R₋``. A inversa ``ℰ(z)`` é de
Toeplitz triangular inferior com entradas ``c_{j−k}`` e se decompõe em
``[[E₊, E], [E₋₊, E₋]]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np
from scipy.linalg import toeplitz

from .errors import NumericalError, RegimeError
from .symbol import CLASSIFY_TOLERANCE, Case, char_roots_I, require_case

if TYPE_CHECKING:
    from .toeplitz import OperatorSpec

GEOMETRIC_SWITCH = 1e-6
DEGENERACY_TOLERANCE = 1e-12


def F_geom(n: int, t: complex) -> complex:
    """Soma geométrica ``F_n(t) = 1 + t + … + t^{n−1}`` (``F_n(1) = n``)."""

    t = complex(t)
    if n <= 0:
        return 0j
    if abs(1.0 - t) > GEOMETRIC_SWITCH:
        return (1.0 - t**n) / (1.0 - t)
    return complex(np.polyval(np.ones(n), t))


def F_geom_range(n: int, t: complex) -> np.ndarray:
    """Vetor ``(F_1(t), …, F_n(t))``."""

    t = complex(t)
    if n <= 0:
        return np.empty(0, dtype=np.complex128)
    exponents = np.arange(1, n + 1)
    if abs(1.0 - t) > GEOMETRIC_SWITCH:
        return (1.0 - np.power(t, exponents)) / (1.0 - t)
    return np.cumsum(np.power(t, exponents - 1))


def _powers(zeta: complex, exponents) -> np.ndarray:
    """``ζ^k`` em forma log-polar."""

    return np.exp(np.asarray(exponents, dtype=float) * cmath.log(zeta))


def build_calP(z: complex, spec: "OperatorSpec") -> np.ndarray:
    """``𝒫(z)``: ``a`` na diagonal, ``−z`` na subdiagonal, ``b`` na sub-subdiagonal."""

    require_case(spec.params, Case.I)
    size = spec.n + 1
    column = np.zeros(size, dtype=np.complex128)
    column[0] = spec.a
    if size > 1:
        column[1] = -complex(z)
    if size > 2:
        column[2] = spec.b
    return toeplitz(column, np.zeros(size, dtype=np.complex128))


@dataclass(frozen=True)
class GeomCoeffs:
    """Coeficientes ``c_0..c_N`` da inversa de ``𝒫(z)``."""

    c: np.ndarray

    def recurrence_residual(self, z: complex, spec: "OperatorSpec") -> float:
        """Máximo de ``|b·c[k−1] − z·c[k] + a·c[k+1]|`` relativo à escala dos termos."""

        c = self.c
        if c.size < 3:
            return 0.0
        residual = spec.b * c[:-2] - complex(z) * c[1:-1] + spec.a * c[2:]
        scale = np.abs(spec.b * c[:-2]) + np.abs(complex(z) * c[1:-1]) + np.abs(spec.a * c[2:])
        return float(np.max(np.abs(residual) / np.maximum(scale, np.finfo(float).tiny)))


def geom_coeffs(z: complex, spec: "OperatorSpec") -> GeomCoeffs:
    """``c_k = ζ₋^k F_{k+1}(ζ₊/ζ₋)/a``, ``k = 0..N``."""

    require_case(spec.params, Case.I)
    roots = char_roots_I(z, spec.params)
    k = np.arange(spec.n + 1)
    values = _powers(roots.zeta_minus, k) * F_geom_range(spec.n + 1, roots.ratio) / spec.a
    return GeomCoeffs(c=values)


@dataclass(frozen=True)
class GrushinInverse:
    """Blocos ``(E, E₊, E₋, E₋₊)`` da inversa do sistema de Grushin."""

    E: np.ndarray
    E_plus: np.ndarray
    E_minus: np.ndarray
    E_mp: complex

    @property
    def n(self) -> int:
        return self.E_plus.shape[0]

    def assemble(self) -> np.ndarray:
        n = self.n
        full = np.zeros((n + 1, n + 1), dtype=np.complex128)
        full[:n, 0] = self.E_plus
        full[:n, 1:] = self.E
        full[n, 0] = self.E_mp
        full[n, 1:] = self.E_minus
        return full


def grushin_blocks(inverse: np.ndarray) -> GrushinInverse:
    """Extrai os quatro blocos de uma inversa ``(N+1)×(N+1)`` já montada."""

    n = inverse.shape[0] - 1
    return GrushinInverse(
        E=np.array(inverse[:n, 1:]),
        E_plus=np.array(inverse[:n, 0]),
        E_minus=np.array(inverse[n, 1:]),
        E_mp=complex(inverse[n, 0]),
    )


def grushin_inverse_closed_form(z: complex, spec: "OperatorSpec") -> GrushinInverse:
    c = geom_coeffs(z, spec).c
    n = spec.n
    shifted = np.concatenate(([0.0], c[: n - 1])).astype(np.complex128)
    E = toeplitz(shifted, np.zeros(n, dtype=np.complex128))
    return GrushinInverse(E=E, E_plus=c[:n].copy(), E_minus=c[:n][::-1].copy(), E_mp=complex(c[n]))


def e_mp(z: complex, spec: "OperatorSpec") -> complex:
    """``E₋₊(z) = ζ₋^N F_{N+1}(ζ₊/ζ₋)/a``."""

    roots = char_roots_I(z, spec.params)
    return complex(_powers(roots.zeta_minus, spec.n)) * F_geom(spec.n + 1, roots.ratio) / spec.a


@dataclass(frozen=True)
class NormBounds:
    bound_E: float
    bound_Epm: float
    bound_Emp: float
    young_bound_E: float


def norm_bounds_interior(z: complex, spec: "OperatorSpec") -> NormBounds:
    """Cotas explícitas de ``‖E‖``, ``‖E±‖`` e ``|E₋₊|`` com ``ζ± ∈ D(0, 1)``."""

    require_case(spec.params, Case.I)
    roots = char_roots_I(z, spec.params)
    s = abs(roots.zeta_minus)
    if s >= 1.0:
        raise RegimeError(f"z={z} fora do regime interior: |ζ₋| = {s:.12g} ≥ 1")
    n = spec.n
    inv_a = 1.0 / spec.params.abs_a
    gap = abs(1.0 - roots.ratio)
    by_size = float(n)
    by_decay = 2.0 / (1.0 - s)
    by_ratio = 2.0 / gap if gap > 0 else math.inf
    first = min(by_size, by_decay)
    second = min(by_size, by_decay, by_ratio)
    c = geom_coeffs(z, spec).c
    return NormBounds(
        bound_E=inv_a * first * second,
        bound_Epm=inv_a * math.sqrt(first) * second,
        bound_Emp=inv_a * s**n * min(n + 1.0, by_ratio),
        young_bound_E=float(np.sum(np.abs(c[: max(n - 1, 0)]))),
    )


def _check_nondegenerate(z: complex, roots, n: int) -> complex:
    power = complex(_powers(roots.ratio, n + 1))
    if roots.is_double or abs(1.0 - power) <= DEGENERACY_TOLERANCE:
        raise RegimeError(f"z={z}: ζ₊^(N+1) = ζ₋^(N+1), núcleo do resolvente indefinido")
    return power


def fundamental_solution(k, z: complex, spec: "OperatorSpec"):
    """``F(k) = ζ₊^k/(a(ζ₊−ζ₋))`` para ``k ≥ 0`` e ``ζ₋^k/(a(ζ₊−ζ₋))`` para ``k ≤ 0``."""

    roots = char_roots_I(z, spec.params)
    k_arr = np.asarray(k, dtype=float)
    values = _fundamental(k_arr, roots, spec.a)
    return complex(values) if values.ndim == 0 else values


def _fundamental(k: np.ndarray, roots, a: complex) -> np.ndarray:
    coefficient = 1.0 / (a * (roots.zeta_plus - roots.zeta_minus))
    base = np.where(k >= 0, cmath.log(roots.zeta_plus), cmath.log(roots.zeta_minus))
    return coefficient * np.exp(k * base)


def _kernel(j: np.ndarray, k: np.ndarray, z: complex, spec: "OperatorSpec") -> np.ndarray:
    require_case(spec.params, Case.I)
    roots = char_roots_I(z, spec.params)
    n = spec.n
    power = _check_nondegenerate(z, roots, n)
    denominator = 1.0 - power
    log_plus = cmath.log(roots.zeta_plus)
    log_minus = cmath.log(roots.zeta_minus)
    j = np.asarray(j, dtype=float)
    k = np.asarray(k, dtype=float)
    u_left = (np.exp(j * log_plus) - np.exp((n + 1) * log_plus - (n + 1 - j) * log_minus)) / denominator
    u_right = (np.exp(-(n + 1 - j) * log_minus) - np.exp(j * log_plus - (n + 1) * log_minus)) / denominator
    return (
        _fundamental(j - k, roots, spec.a)
        - _fundamental(-k, roots, spec.a) * u_left
        - _fundamental(n + 1 - k, roots, spec.a) * u_right
    )


def resolvent_kernel(j: int, k: int, z: complex, spec: "OperatorSpec") -> complex:
    """Entrada ``E(j, k)`` de ``(P − z)⁻¹`` (índices a partir de 1)."""

    return complex(_kernel(np.asarray(j), np.asarray(k), z, spec))


def resolvent_matrix(z: complex, spec: "OperatorSpec") -> np.ndarray:
    """Todas as entradas de ``(P − z)⁻¹`` pela fórmula explícita."""

    idx = np.arange(1, spec.n + 1)
    j, k = np.meshgrid(idx, idx, indexing="ij")
    return _kernel(j, k, z, spec)


def _exterior_roots(z: complex, spec: "OperatorSpec"):
    require_case(spec.params, Case.I)
    roots = char_roots_I(z, spec.params)
    tol = CLASSIFY_TOLERANCE
    if abs(roots.zeta_plus) > 1.0 + tol or abs(roots.zeta_minus) < 1.0 - tol:
        raise RegimeError(
            f"z={z} fora do regime exterior: |ζ₊|={abs(roots.zeta_plus):.6g}, |ζ₋|={abs(roots.zeta_minus):.6g}"
        )
    return roots


def _real_geom(n: int, x: float) -> float:
    return F_geom(n, x).real


def resolvent_norm_bound_exterior(z: complex, spec: "OperatorSpec") -> float:
    """Cota explícita de ``‖(P − z)⁻¹‖`` para ``|ζ₊| ≤ 1 ≤ |ζ₋|`` em termos de ``F_N``.

    Soma de Young do núcleo de convolução mais as normas dos dois termos de
    posto um; as normas ℓ² são majoradas por ``|ζ₊|F_N(|ζ₊|)^{1/2}`` e
    ``|ζ₋|^{−1}F_N(1/|ζ₋|)^{1/2}``.
    """

    roots = _exterior_roots(z, spec)
    n = spec.n
    power = _check_nondegenerate(z, roots, n)
    sp = abs(roots.zeta_plus)
    inv_sm = 1.0 / abs(roots.zeta_minus)
    prefactor = 1.0 / (spec.params.abs_a * abs(roots.zeta_plus - roots.zeta_minus))
    convolution = 1.0 + sp * _real_geom(n - 1, sp) + inv_sm * _real_geom(n - 1, inv_sm)
    rank_one = 4.0 / abs(1.0 - power) * sp * inv_sm * math.sqrt(_real_geom(n, sp) * _real_geom(n, inv_sm))
    return prefactor * (convolution + rank_one)


def resolvent_norm_bound_exterior_sharp(z: complex, spec: "OperatorSpec") -> float:
    """Mesma cota com as somas e normas ℓ² calculadas exatamente."""

    roots = _exterior_roots(z, spec)
    n = spec.n
    power = _check_nondegenerate(z, roots, n)
    sp = abs(roots.zeta_plus)
    inv_sm = 1.0 / abs(roots.zeta_minus)
    prefactor = 1.0 / (spec.params.abs_a * abs(roots.zeta_plus - roots.zeta_minus))
    m = np.arange(1, n)
    convolution = 1.0 + float(np.sum(sp**m) + np.sum(inv_sm**m))
    j = np.arange(1, n + 1)
    norm_plus = math.sqrt(float(np.sum(sp ** (2 * j))))
    norm_minus = math.sqrt(float(np.sum(inv_sm ** (2 * j))))
    return prefactor * (convolution + 4.0 / abs(1.0 - power) * norm_plus * norm_minus)


def count_zeros(
    func: Callable[[complex], complex], center: complex, radius: float, n_points: int = 256
) -> int:
    """Número de zeros de ``func`` no disco, pelo princípio do argumento."""

    theta = 2.0 * np.pi * np.arange(n_points + 1) / n_points
    values = np.array([func(center + radius * np.exp(1j * angle)) for angle in theta])
    if np.any(values == 0) or not np.all(np.isfinite(values)):
        raise NumericalError(f"função se anula ou diverge sobre o círculo |z − {center}| = {radius}")
    winding = np.sum(np.angle(values[1:] / values[:-1])) / (2.0 * np.pi)
    return int(round(winding))


__all__ = [
    "F_geom",
    "F_geom_range",
    "GeomCoeffs",
    "GrushinInverse",
    "NormBounds",
    "build_calP",
    "count_zeros",
    "e_mp",
    "fundamental_solution",
    "geom_coeffs",
    "grushin_blocks",
    "grushin_inverse_closed_form",
    "norm_bounds_interior",
    "resolvent_kernel",
    "resolvent_matrix",
    "resolvent_norm_bound_exterior",
    "resolvent_norm_bound_exterior_sharp",
]
