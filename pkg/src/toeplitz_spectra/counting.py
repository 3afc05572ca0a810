"""Contagem de autovalores em regiões ``Γ(r, γ)`` e verificação da lei de Weyl probabilística."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, GateViolation
from .perturbation import DEFAULT_DELTA_0, PerturbationConfig, TrialResult, effective_kappa, run_trials
from .symbol import Case, SymbolParams, dist_to_arc, dist_to_E1_many, outside_E1, require_case, require_ellipse

LOGGER = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEFAULT_C_ACC = 2.0
DISTANCE_EQUALITY_TOLERANCE = 1e-9
MIN_MESH = 64
MAX_REGION_RADIUS = 0.3
MIN_KAPPA = 2.5


class MembershipMode(str, Enum):
    PI_PROJECTION = "PiProjection"
    DISTANCE_EQUALITY = "DistanceEquality"


@dataclass(frozen=True)
class ArcRegion:
    """Região ``Γ(r, γ)`` em torno do arco ``γ = P_I([ξ_lo, ξ_hi])`` da elipse ``E₁``."""

    xi_lo: float
    xi_hi: float
    r: float
    mode: MembershipMode = MembershipMode.PI_PROJECTION

    def __post_init__(self) -> None:
        for name in ("xi_lo", "xi_hi", "r"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ConfigError(f"{name} deve ser finito, recebido {value}")
            object.__setattr__(self, name, value)
        if self.xi_hi < self.xi_lo or self.xi_hi > self.xi_lo + TWO_PI + 1e-12:
            raise ConfigError(f"arco inválido: exige xi_lo ≤ xi_hi ≤ xi_lo + 2π, recebido [{self.xi_lo}, {self.xi_hi}]")
        if self.r <= 0:
            raise ConfigError(f"r deve ser > 0, recebido {self.r}")
        try:
            object.__setattr__(self, "mode", MembershipMode(self.mode))
        except ValueError as exc:
            raise ConfigError(f"modo de pertinência desconhecido: {self.mode!r}") from exc

    @classmethod
    def full_circle(cls, r: float, mode: MembershipMode = MembershipMode.PI_PROJECTION) -> "ArcRegion":
        return cls(0.0, TWO_PI, r, mode)

    @property
    def length(self) -> float:
        return min(self.xi_hi - self.xi_lo, TWO_PI)

    @property
    def is_full(self) -> bool:
        return self.length >= TWO_PI - 1e-12

    def gate_violations(self, n: int) -> List[str]:
        """Desigualdades ``r ≥ 4 ln N/N`` e ``r ≤ 0.3`` que falham."""

        violations = []
        floor = 4.0 * math.log(n) / n if n > 1 else 0.0
        if self.r < floor:
            violations.append(f"r = {self.r:.6g} < 4 ln N/N = {floor:.6g}")
        if self.r > MAX_REGION_RADIUS:
            violations.append(f"r = {self.r:.6g} > {MAX_REGION_RADIUS}")
        return violations


@dataclass(frozen=True)
class CountReport:
    n: int
    a: complex
    b: complex
    delta: float
    kappa: Optional[float]
    seed: int
    trials: int
    region: ArcRegion
    theoretical: float
    per_trial: Tuple[int, ...]
    mean: float
    std: float
    bound_rhs: float
    pass_fraction: float
    probability_floor: float
    exterior_per_trial: Tuple[int, ...]
    exterior_bound: float
    exterior_pass_fraction: float
    stray_per_trial: Tuple[int, ...]
    theorem_regime: bool
    gate_violations: Tuple[str, ...] = field(default_factory=tuple)


def _in_arc(xi: np.ndarray, region: ArcRegion) -> np.ndarray:
    if region.is_full:
        return np.ones(xi.shape, dtype=bool)
    offset = np.mod(xi - region.xi_lo, TWO_PI)
    return offset <= region.length + 1e-12


def gamma_membership_many(zs, region: ArcRegion, p: SymbolParams) -> np.ndarray:
    """Máscara de pertinência a ``Γ(r, γ)`` para vários pontos."""

    require_case(p, Case.I)
    require_ellipse(p, strict=True)
    z = np.atleast_1d(np.asarray(zs, dtype=np.complex128)).ravel()
    if z.size == 0:
        return np.zeros(0, dtype=bool)
    distance, xi = dist_to_E1_many(z, p)
    near = distance < region.r
    if region.mode is MembershipMode.PI_PROJECTION:
        return near & _in_arc(xi, region)
    if region.is_full:
        return near
    mask = near.copy()
    if np.any(near):
        to_arc = dist_to_arc(z[near], region.xi_lo, region.xi_hi, p)
        mask[near] = np.abs(to_arc - distance[near]) <= DISTANCE_EQUALITY_TOLERANCE * np.maximum(1.0, to_arc)
    return mask


def gamma_membership(z: complex, region: ArcRegion, p: SymbolParams) -> bool:
    return bool(gamma_membership_many([z], region, p)[0])


def weyl_count(region: ArcRegion, n: int) -> float:
    """``N·|arco|/(2π)``."""

    return n * region.length / TWO_PI


def _outer_root_modulus(zs: np.ndarray, p: SymbolParams) -> np.ndarray:
    """``|ζ₋(z)|`` vetorizado, pela mesma fatoração estável de :func:`char_roots_I`."""

    c = p.focal_point
    disc = np.sqrt((zs - c) * (zs + c))
    q = np.where(np.abs(zs + disc) >= np.abs(zs - disc), zs + disc, zs - disc)
    return np.maximum(np.abs(q / (2.0 * p.a)), np.abs(2.0 * p.b / q))


def _potential(rho: np.ndarray, xi: np.ndarray, p: SymbolParams) -> np.ndarray:
    """``max(ln|ζ₋(z)|, 0)`` no ponto ``z = aρe^{iξ} + bρ⁻¹e^{−iξ}``."""

    zs = p.a * rho * np.exp(1j * xi) + p.b / rho * np.exp(-1j * xi)
    return np.maximum(np.log(_outer_root_modulus(zs, p)), 0.0)


def delta_phi_arc_identity(region: ArcRegion, p: SymbolParams, mesh: int = 4096) -> float:
    """Massa de ``Δφ`` sobre ``Γ`` pela fórmula de Green em coordenadas ``ζ₋``.

    Integra o fluxo de ``∇φ`` (diferenças centradas) pela fronteira do setor polar
    ``{1−h < ρ < 1+h, ξ ∈ [ξ_lo, ξ_hi]}`` com a regra do ponto médio; o resultado
    deve coincidir com o comprimento do arco.
    """

    require_case(p, Case.I)
    require_ellipse(p, strict=True)
    if mesh < MIN_MESH:
        raise ConfigError(f"mesh deve ser ≥ {MIN_MESH}, recebido {mesh}")
    length = region.length
    if length == 0:
        return 0.0
    h = min(0.25, 0.5 * (1.0 - p.r_min))
    inner, outer = 1.0 - h, 1.0 + h
    step = 1e-6

    xi = region.xi_lo + length * (np.arange(mesh) + 0.5) / mesh
    d_xi = length / mesh

    def radial_derivative(rho: float) -> np.ndarray:
        rhos = np.full(mesh, rho)
        return (_potential(rhos + step, xi, p) - _potential(rhos - step, xi, p)) / (2.0 * step)

    flux = np.sum(radial_derivative(outer)) * outer * d_xi - np.sum(radial_derivative(inner)) * inner * d_xi

    rho = inner + 2.0 * h * (np.arange(mesh) + 0.5) / mesh
    d_rho = 2.0 * h / mesh

    def angular_derivative(angle: float) -> np.ndarray:
        angles = np.full(mesh, angle)
        return (_potential(rho, angles + step, p) - _potential(rho, angles - step, p)) / (2.0 * step) / rho

    flux += np.sum(angular_derivative(region.xi_lo + length) - angular_derivative(region.xi_lo)) * d_rho
    return float(flux)


def empirical_count(eigenvalues: Sequence[complex], region: ArcRegion, p: SymbolParams) -> int:
    return int(np.count_nonzero(gamma_membership_many(eigenvalues, region, p)))


def stray_count(eigenvalues: Sequence[complex], p: SymbolParams, r: float) -> int:
    """Autovalores dentro de ``E₁`` a distância > r, mais todos os de fora."""

    z = np.atleast_1d(np.asarray(eigenvalues, dtype=np.complex128)).ravel()
    if z.size == 0:
        return 0
    distance, _ = dist_to_E1_many(z, p)
    outside = outside_E1(z, p)
    return int(np.count_nonzero(outside | (distance > r)))


def exterior_count(eigenvalues: Sequence[complex], p: SymbolParams, r: float) -> int:
    """Autovalores fora de ``E₁`` a distância > r."""

    z = np.atleast_1d(np.asarray(eigenvalues, dtype=np.complex128)).ravel()
    if z.size == 0:
        return 0
    distance, _ = dist_to_E1_many(z, p)
    return int(np.count_nonzero(outside_E1(z, p) & (distance > r)))


def probability_floor(n: int, r: float, kappa: Optional[float], delta_0: float) -> float:
    """``max(0, 1 − (1/r + ln N)N^{2κ}e^{−2N^{δ₀}})``, em escala logarítmica."""

    if kappa is None or n < 2:
        return 0.0
    log_term = math.log(1.0 / r + math.log(n)) + 2.0 * kappa * math.log(n) - 2.0 * n**delta_0
    if log_term >= 0:
        return 0.0
    return -math.expm1(log_term)


def theorem_gate_violations(config: PerturbationConfig, region: ArcRegion) -> List[str]:
    violations = []
    n = config.n
    if config.delta == 0:
        violations.append("δ = 0: ensemble não perturbado")
    kappa = effective_kappa(config)
    if kappa is not None and not kappa > MIN_KAPPA:
        violations.append(f"κ = {kappa:.6g} ≤ 5/2")
    violations.extend(region.gate_violations(n))
    return violations


def eigenvalue_count_mc(
    config: PerturbationConfig,
    region: ArcRegion,
    delta_0: float = DEFAULT_DELTA_0,
    *,
    c_acc: float = DEFAULT_C_ACC,
    enforce_gates: bool = True,
    jobs: int = 1,
    progress: bool = False,
    results: Optional[Sequence[TrialResult]] = None,
) -> CountReport:
    """Executa os ensaios e compara cada contagem em ``Γ`` com a contagem de Weyl.

    Um ensaio passa quando ``|contagem − N|γ|/2π| ≤ C_acc·N^{δ₀}(1/r + ln N)``. A
    estatística exterior conta os autovalores fora de ``Γ`` de círculo inteiro e a
    compara com ``C_acc·N^{δ₀} ln N``. Com ``enforce_gates=True`` qualquer hipótese
    violada levanta :class:`GateViolation` antes do primeiro ensaio.
    """

    spec = config.spec
    p = spec.params
    require_case(p, Case.I)
    require_ellipse(p, strict=True)
    n = spec.n
    violations = theorem_gate_violations(config, region)
    if violations and enforce_gates:
        LOGGER.error("hipóteses do teorema violadas", extra={"violations": violations})
        raise GateViolation(violations)
    if violations:
        LOGGER.warning("executando fora do regime do teorema", extra={"violations": violations})

    if results is None:
        results = run_trials(config, jobs=jobs, progress=progress)
    results = sorted(results, key=lambda item: item.trial_index)

    full = ArcRegion.full_circle(region.r)
    counts, exterior, strays = [], [], []
    for result in results:
        counts.append(empirical_count(result.eigenvalues, region, p))
        exterior.append(n - empirical_count(result.eigenvalues, full, p))
        strays.append(stray_count(result.eigenvalues, p, region.r))

    theoretical = weyl_count(region, n)
    growth = n**delta_0
    bound_rhs = c_acc * growth * (1.0 / region.r + math.log(n))
    exterior_bound = c_acc * growth * math.log(n)
    counts_arr = np.asarray(counts, dtype=float)
    kappa = effective_kappa(config)
    report = CountReport(
        n=n,
        a=p.a,
        b=p.b,
        delta=config.delta,
        kappa=config.kappa,
        seed=config.master_seed,
        trials=len(results),
        region=region,
        theoretical=theoretical,
        per_trial=tuple(counts),
        mean=float(counts_arr.mean()),
        std=float(counts_arr.std()),
        bound_rhs=bound_rhs,
        pass_fraction=float(np.mean(np.abs(counts_arr - theoretical) <= bound_rhs)),
        probability_floor=probability_floor(n, region.r, kappa, delta_0),
        exterior_per_trial=tuple(exterior),
        exterior_bound=exterior_bound,
        exterior_pass_fraction=float(np.mean(np.asarray(exterior) <= exterior_bound)),
        stray_per_trial=tuple(strays),
        theorem_regime=not violations,
        gate_violations=tuple(violations),
    )
    LOGGER.info(
        "contagem concluída",
        extra={"n": n, "trials": report.trials, "mean": report.mean, "pass_fraction": report.pass_fraction},
    )
    return report


__all__ = [
    "ArcRegion",
    "CountReport",
    "MembershipMode",
    "delta_phi_arc_identity",
    "empirical_count",
    "exterior_count",
    "gamma_membership",
    "gamma_membership_many",
    "probability_floor",
    "stray_count",
    "eigenvalue_count_mc",
    "theorem_gate_violations",
    "weyl_count",
]
