"""Geometria dos símbolos: curvas imagem, raízes características e classificação de regiões."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import ConfigError, RegimeError

CLASSIFY_TOLERANCE = 1e-9
DOUBLE_ROOT_TOLERANCE = 1e-8
GRID_SAMPLES = 1024
_NEWTON_ITERATIONS = 60
_CHUNK = 2048


class Case(str, Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True)
class SymbolParams:
    """Coeficientes ``a = |a|e^{iα}``, ``b = |b|e^{iβ}`` e o caso do símbolo."""

    a: complex
    b: complex
    case: Case = Case.I

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        try:
            object.__setattr__(self, "case", Case(self.case))
        except ValueError as exc:
            raise ConfigError(f"caso desconhecido: {self.case!r} (use I ou II)") from exc
        for name in ("a", "b"):
            value = getattr(self, name)
            if not cmath.isfinite(value):
                raise ConfigError(f"{name} deve ser finito, recebido {value}")
            if value == 0:
                raise ConfigError(f"{name} deve ser não nulo")

    @property
    def alpha(self) -> float:
        return cmath.phase(self.a)

    @property
    def beta(self) -> float:
        return cmath.phase(self.b)

    @property
    def abs_a(self) -> float:
        return abs(self.a)

    @property
    def abs_b(self) -> float:
        return abs(self.b)

    @property
    def sqrt_ab(self) -> complex:
        """Ramo principal de √(ab)."""

        return cmath.sqrt(self.a * self.b)

    @property
    def focal_point(self) -> complex:
        return 2.0 * self.sqrt_ab

    @property
    def r_min(self) -> float:
        return math.sqrt(self.abs_b / self.abs_a)

    @property
    def critical_point(self) -> complex:
        """Ponto crítico ``−a/(2b)`` de ``aζ + bζ²``."""

        return -self.a / (2.0 * self.b)

    @property
    def critical_value(self) -> complex:
        """Valor crítico ``−a²/(4b)`` de ``aζ + bζ²``."""

        return -(self.a * self.a) / (4.0 * self.b)

    def with_case(self, case: Case | str) -> "SymbolParams":
        return SymbolParams(self.a, self.b, Case(case))


@dataclass(frozen=True)
class CharRoots:
    """Raízes da equação característica ordenadas por módulo (``|ζ₊| ≤ |ζ₋|``)."""

    zeta_plus: complex
    zeta_minus: complex
    is_double: bool

    @property
    def ratio(self) -> complex:
        """``ζ₊/ζ₋``, de módulo ≤ 1."""

        return self.zeta_plus / self.zeta_minus

    def __iter__(self):
        yield self.zeta_plus
        yield self.zeta_minus


class RegionI(str, Enum):
    INTERIOR = "Interior"
    ON_CURVE = "OnCurve"
    EXTERIOR = "Exterior"
    FOCAL_SEGMENT = "FocalSegment"


class RegionII(str, Enum):
    INT_INT = "IntInt"
    ON_GAMMA_INT = "OnGammaInt"
    SELF_INTERSECTION = "SelfIntersection"
    ANNULUS = "Annulus"
    ON_GAMMA_EXT = "OnGammaExt"
    EXTERIOR = "Exterior"
    CUSP = "Cusp"
    SIMPLE_INTERIOR = "SimpleInterior"
    SIMPLE_ON_CURVE = "SimpleOnCurve"


class Case2Regime(str, Enum):
    SIMPLE = "Simple"
    CUSP = "Cusp"
    SELF_INTERSECTING = "SelfIntersecting"


class ConfocalRadii(NamedTuple):
    rho_plus: float
    rho_minus: float


def require_case(p: SymbolParams, case: Case) -> None:
    if p.case is not case:
        raise RegimeError(f"operação exige caso {case.value}, recebido caso {p.case.value}")


def require_ellipse(p: SymbolParams, *, strict: bool = False) -> None:
    if strict and not p.abs_b < p.abs_a:
        raise RegimeError(f"exige |b| < |a|, recebido |a|={p.abs_a:.6g}, |b|={p.abs_b:.6g}")
    if not strict and p.abs_b > p.abs_a:
        raise RegimeError(f"exige |b| ≤ |a|, recebido |a|={p.abs_a:.6g}, |b|={p.abs_b:.6g}")


def _scalar_or_array(values: np.ndarray, like) -> complex | np.ndarray:
    if np.ndim(like) == 0:
        return complex(values)
    return values


def symbol_I(xi, p: SymbolParams):
    """``P_I(ξ) = a e^{iξ} + b e^{−iξ}``."""

    xi_arr = np.asarray(xi, dtype=float)
    values = p.a * np.exp(1j * xi_arr) + p.b * np.exp(-1j * xi_arr)
    return _scalar_or_array(values, xi)


def symbol_II(xi, p: SymbolParams):
    """``P_II(ξ) = a e^{iξ} + b e^{2iξ}``."""

    xi_arr = np.asarray(xi, dtype=float)
    values = p.a * np.exp(1j * xi_arr) + p.b * np.exp(2j * xi_arr)
    return _scalar_or_array(values, xi)


def _ordered(first: complex, second: complex) -> CharRoots:
    if abs(second) < abs(first):
        first, second = second, first
    double = abs(first - second) <= DOUBLE_ROOT_TOLERANCE * abs(second)
    return CharRoots(zeta_plus=complex(first), zeta_minus=complex(second), is_double=bool(double))


def char_roots_I(z: complex, p: SymbolParams) -> CharRoots:
    """Raízes de ``aζ² − zζ + b = 0`` (equivalente a ``aζ + b/ζ = z``)."""

    require_case(p, Case.I)
    z = complex(z)
    c = p.focal_point
    disc = cmath.sqrt((z - c) * (z + c))
    q = z + disc if abs(z + disc) >= abs(z - disc) else z - disc
    # q ≠ 0: z = ±disc exigiria ab = 0
    first = q / (2.0 * p.a)
    second = 2.0 * p.b / q
    return _ordered(first, second)


def char_roots_II(z: complex, p: SymbolParams) -> CharRoots:
    """Raízes de ``bζ² + aζ − z = 0``."""

    require_case(p, Case.II)
    z = complex(z)
    disc = cmath.sqrt(4.0 * p.b * (z - p.critical_value))
    s = p.a + disc if abs(p.a + disc) >= abs(p.a - disc) else p.a - disc
    q = -0.5 * s
    first = q / p.b
    second = -z / q
    return _ordered(first, second)


def classify_I(z: complex, p: SymbolParams, *, refine_focal: bool = False) -> RegionI:
    """Classifica ``z`` pelos módulos das raízes em relação a S¹.

    O rótulo ``FocalSegment`` só é devolvido com ``refine_focal=True``; sem ele os
    pontos do segmento focal recebem o rótulo da tricotomia (``Interior`` quando
    ``|b| < |a|``).
    """

    require_case(p, Case.I)
    require_ellipse(p)
    roots = char_roots_I(z, p)
    outer = abs(roots.zeta_minus)
    inner = abs(roots.zeta_plus)
    tol = CLASSIFY_TOLERANCE
    if abs(outer - 1.0) <= tol:
        return RegionI.ON_CURVE
    if refine_focal and abs(inner - outer) <= tol * outer:
        return RegionI.FOCAL_SEGMENT
    if outer < 1.0 - tol:
        return RegionI.INTERIOR
    return RegionI.EXTERIOR


def case2_regime(p: SymbolParams) -> Case2Regime:
    """Regime do caso II segundo ``|b|`` comparado a ``|a|/2``."""

    gap = 2.0 * p.abs_b - p.abs_a
    if abs(gap) <= CLASSIFY_TOLERANCE * p.abs_a:
        return Case2Regime.CUSP
    return Case2Regime.SIMPLE if gap < 0 else Case2Regime.SELF_INTERSECTING


def root_counts(roots: CharRoots, tol: float = CLASSIFY_TOLERANCE) -> Tuple[int, int, int]:
    """Quantidade de raízes dentro, sobre e fora de S¹."""

    inside = on = outside = 0
    for root in roots:
        modulus = abs(root)
        if abs(modulus - 1.0) <= tol:
            on += 1
        elif modulus < 1.0:
            inside += 1
        else:
            outside += 1
    return inside, on, outside


_GENERAL_TAGS = {
    (2, 0, 0): RegionII.INT_INT,
    (1, 1, 0): RegionII.ON_GAMMA_INT,
    (0, 2, 0): RegionII.SELF_INTERSECTION,
    (1, 0, 1): RegionII.ANNULUS,
    (0, 1, 1): RegionII.ON_GAMMA_EXT,
    (0, 0, 2): RegionII.EXTERIOR,
}


def classify_II(z: complex, p: SymbolParams) -> RegionII:
    require_case(p, Case.II)
    roots = char_roots_II(z, p)
    counts = root_counts(roots)
    regime = case2_regime(p)
    if regime is not Case2Regime.SELF_INTERSECTING:
        if counts == (1, 0, 1):
            return RegionII.SIMPLE_INTERIOR
        if counts == (0, 1, 1):
            return RegionII.SIMPLE_ON_CURVE
        if counts == (0, 2, 0) and regime is Case2Regime.CUSP:
            return RegionII.CUSP
    return _GENERAL_TAGS[counts]


@dataclass(frozen=True)
class EllipseFamily:
    """Família confocal ``E_ρ``, imagens dos círculos ``|ζ| = ρ`` pelo símbolo do caso I."""

    c: complex
    abs_a: float
    abs_b: float
    rotation: complex

    @property
    def r_min(self) -> float:
        return math.sqrt(self.abs_b / self.abs_a)

    def g(self, rho):
        """Semieixo maior ``|a|ρ + |b|/ρ`` de ``E_ρ``."""

        rho = np.asarray(rho, dtype=float)
        values = self.abs_a * rho + self.abs_b / rho
        return float(values) if values.ndim == 0 else values

    def point(self, eta, rho: float = 1.0):
        eta_arr = np.asarray(eta, dtype=float)
        major = self.abs_a * rho + self.abs_b / rho
        minor = self.abs_a * rho - self.abs_b / rho
        values = self.rotation * (major * np.cos(eta_arr) + 1j * minor * np.sin(eta_arr))
        return _scalar_or_array(values, eta)


def ellipse_family(p: SymbolParams) -> EllipseFamily:
    require_ellipse(p)
    rotation = cmath.exp(0.5j * (p.alpha + p.beta))
    return EllipseFamily(c=p.focal_point, abs_a=p.abs_a, abs_b=p.abs_b, rotation=rotation)


def ellipse_point(eta, p: SymbolParams):
    """Ponto de ``E₁``: ``e^{i(α+β)/2}((|a|+|b|)cos η + i(|a|−|b|)sin η)``."""

    return ellipse_family(p).point(eta, 1.0)


def focal_points(p: SymbolParams) -> Tuple[complex, complex]:
    c = p.focal_point
    return c, -c


def confocal_radii(z: complex, p: SymbolParams) -> ConfocalRadii:
    """Raios ``ρ₊ ≤ r_min ≤ ρ₋`` com ``2g(ρ±) = |z−c| + |z+c|``."""

    require_ellipse(p, strict=True)
    z = complex(z)
    c = p.focal_point
    half_sum = 0.5 * (abs(z - c) + abs(z + c))
    disc = max(half_sum * half_sum - 4.0 * p.abs_a * p.abs_b, 0.0)
    rho_minus = (half_sum + math.sqrt(disc)) / (2.0 * p.abs_a)
    rho_plus = p.abs_b / (p.abs_a * rho_minus)
    return ConfocalRadii(rho_plus=rho_plus, rho_minus=rho_minus)


def outside_E1(zs, p: SymbolParams) -> np.ndarray:
    """Máscara dos pontos estritamente fora da elipse fechada ``E₁``."""

    z = np.asarray(zs, dtype=np.complex128)
    c = p.focal_point
    return np.abs(z - c) + np.abs(z + c) > 2.0 * (p.abs_a + p.abs_b)


def dist_to_focal_segment(zs, p: SymbolParams):
    """Distância ao segmento ``[−2√(ab), 2√(ab)]``."""

    z = np.asarray(zs, dtype=np.complex128)
    c = p.focal_point
    t = np.clip(np.real(z * np.conj(c)) / abs(c) ** 2, -1.0, 1.0)
    values = np.abs(z - t * c)
    return float(values) if values.ndim == 0 else values


def _nearest_parameter(
    zs: np.ndarray, p: SymbolParams, lo: float, hi: float, periodic: bool
) -> Tuple[np.ndarray, np.ndarray]:
    """Minimiza ``|z − P_I(ξ)|²`` em ``[lo, hi]``: grade grossa e refinamento de Newton."""

    if periodic:
        grid = lo + (hi - lo) * np.arange(GRID_SAMPLES) / GRID_SAMPLES
    else:
        grid = np.linspace(lo, hi, GRID_SAMPLES)
    spacing = (hi - lo) / GRID_SAMPLES if hi > lo else 0.0
    curve = p.a * np.exp(1j * grid) + p.b * np.exp(-1j * grid)

    xi = np.empty(zs.shape, dtype=float)
    for start in range(0, zs.size, _CHUNK):
        block = zs[start : start + _CHUNK]
        gaps = np.abs(block[:, None] - curve[None, :])
        xi[start : start + _CHUNK] = grid[np.argmin(gaps, axis=1)]
    coarse = xi.copy()

    for _ in range(_NEWTON_ITERATIONS):
        forward = p.a * np.exp(1j * xi)
        backward = p.b * np.exp(-1j * xi)
        diff = forward + backward - zs
        first = 1j * (forward - backward)
        second = -(forward + backward)
        h1 = 2.0 * np.real(np.conj(diff) * first)
        h2 = 2.0 * (np.abs(first) ** 2 + np.real(np.conj(diff) * second))
        safe = h2 > 0
        step = np.zeros_like(xi)
        step[safe] = h1[safe] / h2[safe]
        step = np.clip(step, -spacing, spacing)
        xi = xi - step
        if not periodic:
            xi = np.clip(xi, lo, hi)
        if np.max(np.abs(step), initial=0.0) < 1e-15:
            break

    refined = np.abs(symbol_I(xi, p) - zs)
    fallback = np.abs(symbol_I(coarse, p) - zs)
    worse = refined > fallback
    xi[worse] = coarse[worse]
    distance = np.where(worse, fallback, refined)
    if periodic:
        xi = np.mod(xi, 2.0 * np.pi)
    return distance, xi


def dist_to_E1_many(zs, p: SymbolParams) -> Tuple[np.ndarray, np.ndarray]:
    """Versão vetorizada de :func:`dist_to_E1`."""

    require_case(p, Case.I)
    require_ellipse(p)
    z = np.atleast_1d(np.asarray(zs, dtype=np.complex128)).ravel()
    if z.size == 0:
        return np.empty(0), np.empty(0)
    return _nearest_parameter(z, p, 0.0, 2.0 * np.pi, periodic=True)


def dist_to_E1(z: complex, p: SymbolParams) -> Tuple[float, float]:
    """``(dist(z, E₁), ξ*)`` com ``ξ* ∈ [0, 2π)`` o parâmetro do ponto mais próximo."""

    distance, xi = dist_to_E1_many([z], p)
    return float(distance[0]), float(xi[0])


def dist_to_arc(zs, xi_lo: float, xi_hi: float, p: SymbolParams):
    """Distância ao arco ``γ = P_I([ξ_lo, ξ_hi])``."""

    require_case(p, Case.I)
    z = np.atleast_1d(np.asarray(zs, dtype=np.complex128)).ravel()
    if xi_hi - xi_lo >= 2.0 * np.pi:
        distance, _ = _nearest_parameter(z, p, xi_lo, xi_lo + 2.0 * np.pi, periodic=True)
    else:
        distance, _ = _nearest_parameter(z, p, xi_lo, xi_hi, periodic=False)
    return float(distance[0]) if np.ndim(zs) == 0 else distance


@dataclass(frozen=True)
class Case2Curve:
    """Decomposição da curva ``P_II(S¹)`` conforme o regime."""

    regime: Case2Regime
    zeta_c: float
    critical_point: complex
    f_zeta_c: complex
    alpha_c: Optional[complex]
    self_intersection: Optional[complex]
    cusp: Optional[complex]
    curve: np.ndarray
    gamma_int: np.ndarray
    gamma_ext: np.ndarray


def case2_curve_decomposition(p: SymbolParams, samples: int = 512) -> Case2Curve:
    """Pontos notáveis e arcos ``γ_int``/``γ_ext`` da curva do caso II.

    ``zeta_c`` e ``alpha_c`` estão na forma normalizada ``f(ζ) = |a|ζ + |b|ζ²``; os
    valores de curva estão nas coordenadas originais, obtidos pela rotação
    ``e^{i(2α−β)}``.
    """

    require_case(p, Case.II)
    if samples < 2:
        raise ConfigError(f"samples deve ser ≥ 2, recebido {samples}")
    big_a, big_b = p.abs_a, p.abs_b
    rotation = cmath.exp(1j * (2.0 * p.alpha - p.beta))

    def image(zeta):
        return rotation * (big_a * zeta + big_b * zeta * zeta)

    regime = case2_regime(p)
    zeta_c = -big_a / (2.0 * big_b)
    eta = 2.0 * np.pi * np.arange(samples) / samples
    curve = image(np.exp(1j * eta))
    empty = np.empty(0, dtype=np.complex128)

    alpha_c: Optional[complex] = None
    crossing: Optional[complex] = None
    cusp: Optional[complex] = None
    gamma_int = gamma_ext = empty
    if regime is Case2Regime.CUSP:
        alpha_c = complex(zeta_c, math.sqrt(max(1.0 - zeta_c * zeta_c, 0.0)))
        cusp = complex(image(alpha_c))
    elif regime is Case2Regime.SELF_INTERSECTING:
        alpha_c = complex(zeta_c, math.sqrt(1.0 - zeta_c * zeta_c))
        crossing = complex(image(alpha_c))
        eta_c = math.acos(zeta_c)
        gamma_int = image(np.exp(1j * np.linspace(eta_c, 2.0 * np.pi - eta_c, samples)))
        gamma_ext = image(np.exp(1j * np.linspace(-eta_c, eta_c, samples)))

    return Case2Curve(
        regime=regime,
        zeta_c=zeta_c,
        critical_point=p.critical_point,
        f_zeta_c=p.critical_value,
        alpha_c=alpha_c,
        self_intersection=crossing,
        cusp=cusp,
        curve=curve,
        gamma_int=gamma_int,
        gamma_ext=gamma_ext,
    )


__all__ = [
    "Case",
    "Case2Curve",
    "Case2Regime",
    "CharRoots",
    "ConfocalRadii",
    "EllipseFamily",
    "RegionI",
    "RegionII",
    "SymbolParams",
    "case2_curve_decomposition",
    "case2_regime",
    "char_roots_I",
    "char_roots_II",
    "classify_I",
    "classify_II",
    "confocal_radii",
    "dist_to_E1",
    "dist_to_E1_many",
    "dist_to_arc",
    "dist_to_focal_segment",
    "ellipse_family",
    "ellipse_point",
    "focal_points",
    "outside_E1",
    "require_case",
    "require_ellipse",
    "root_counts",
    "symbol_I",
    "symbol_II",
]
