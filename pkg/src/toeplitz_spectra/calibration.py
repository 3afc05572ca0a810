"""Procedimentos piloto que congelaram as constantes O(1) usadas nos testes de aceitação."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from .counting import ArcRegion, empirical_count, weyl_count
from .errors import ConfigError
from .grushin import F_geom
from .perturbation import DEFAULT_DELTA_0, DEFAULT_FOCAL_MARGIN, PerturbationConfig, Z_vector, run_trials
from .symbol import Case, SymbolParams, char_roots_I, dist_to_focal_segment, ellipse_family, require_case
from .toeplitz import OperatorSpec

LOGGER = logging.getLogger(__name__)

DEFAULT_RADII = (0.6, 0.8, 0.95, 1.05, 1.2, 1.5)
DEFAULT_ANGLES = 16


@dataclass(frozen=True)
class CalibrationResult:
    name: str
    value: float
    raw: float
    samples: int
    detail: Dict[str, float]


def probe_grid(
    p: SymbolParams,
    radii: Sequence[float] = DEFAULT_RADII,
    angles: int = DEFAULT_ANGLES,
    focal_margin: float = DEFAULT_FOCAL_MARGIN,
) -> np.ndarray:
    """Pontos das elipses confocais ``E_ρ`` a pelo menos ``focal_margin`` do segmento focal."""

    require_case(p, Case.I)
    family = ellipse_family(p)
    eta = 2.0 * np.pi * (np.arange(angles) + 0.5) / angles
    points = np.concatenate([np.atleast_1d(family.point(eta, rho)) for rho in radii])
    keep = np.asarray(dist_to_focal_segment(points, p)) >= focal_margin
    return points[keep]


def calibrate_phi_constant(
    config: PerturbationConfig,
    probes: Optional[Iterable[complex]] = None,
    *,
    jobs: int = 1,
    progress: bool = False,
) -> CalibrationResult:
    """Menor inteiro ``C`` com ``ln|det(P_δ − z)| ≤ N(ln|a| + max(ln|ζ₋|, 0)) + C`` em todo o piloto."""

    spec = config.spec
    p = spec.params
    points = probe_grid(p) if probes is None else np.asarray(list(probes), dtype=np.complex128)
    if points.size == 0:
        raise ConfigError("nenhuma sonda fora da vizinhança do segmento focal")
    base = {}
    for z in points:
        roots = char_roots_I(complex(z), p)
        base[complex(z)] = spec.n * (math.log(p.abs_a) + max(math.log(abs(roots.zeta_minus)), 0.0))
    excess = -math.inf
    for result in run_trials(config, points, jobs=jobs, progress=progress):
        for record in result.records:
            excess = max(excess, record.log_abs_det - base[record.z])
    value = float(max(1, math.ceil(excess)))
    LOGGER.info("constante de φ calibrada", extra={"value": value, "raw": excess, "n": spec.n})
    return CalibrationResult(
        name="c_phi", value=value, raw=excess, samples=config.trials * points.size, detail={"n": float(spec.n)}
    )


def calibrate_acceptance_constant(
    params: SymbolParams,
    ns: Sequence[int] = (100, 200),
    *,
    kappa: float = 2.6,
    trials: int = 50,
    region: Optional[ArcRegion] = None,
    delta_0: float = DEFAULT_DELTA_0,
    factor: float = 2.0,
    master_seed: int = 0,
    jobs: int = 1,
    progress: bool = False,
) -> CalibrationResult:
    """``C_acc = factor · max |contagem − Weyl|/(N^{δ₀}(1/r + ln N))`` sobre a grade piloto."""

    region = region or ArcRegion(0.0, 0.5 * np.pi, 0.15)
    worst = 0.0
    detail: Dict[str, float] = {}
    for n in ns:
        config = PerturbationConfig.from_kappa(OperatorSpec(n, params), kappa, master_seed=master_seed, trials=trials)
        scale = n**delta_0 * (1.0 / region.r + math.log(n))
        theoretical = weyl_count(region, n)
        ratios = [
            abs(empirical_count(result.eigenvalues, region, params) - theoretical) / scale
            for result in run_trials(config, jobs=jobs, progress=progress)
        ]
        detail[f"max_ratio_n{n}"] = max(ratios)
        worst = max(worst, max(ratios))
    value = factor * worst
    LOGGER.info("constante de aceitação calibrada", extra={"value": value, "raw": worst})
    return CalibrationResult(name="c_acc", value=value, raw=worst, samples=trials * len(ns), detail=detail)


def calibrate_root_gap_constant(
    p: SymbolParams, *, focal_margin: float = DEFAULT_FOCAL_MARGIN, extent: float = 1.5, samples: int = 121
) -> CalibrationResult:
    """Constante ``K`` com ``|ζ₊/ζ₋| ≤ 1 − 1/K`` fora da ``focal_margin``-vizinhança do segmento focal."""

    require_case(p, Case.I)
    half_width = extent * (p.abs_a + p.abs_b)
    axis = np.linspace(-half_width, half_width, samples)
    grid = (axis[:, None] + 1j * axis[None, :]).ravel()
    grid = grid[np.asarray(dist_to_focal_segment(grid, p)) >= focal_margin]
    largest = max(abs(char_roots_I(complex(z), p).ratio) for z in grid)
    value = 1.0 / (1.0 - largest)
    return CalibrationResult(
        name="root_gap", value=value, raw=largest, samples=int(grid.size), detail={"max_ratio": largest}
    )


def calibrate_root_separation_constant(
    p: SymbolParams, *, extent: float = 1.5, samples: int = 200
) -> CalibrationResult:
    """Maior ``c₀`` com ``|ζ₊ − ζ₋| ≥ c₀(|z−c| + |z+c| − 2|c|)^{1/2}`` numa grade ``samples × samples``.

    Pontos do segmento focal (lado direito nulo) ficam fora. O ínfimo exato é
    ``|c|^{1/2}/|a|``, aproximado ao longo da reta focal perto de ``±c``.
    """

    require_case(p, Case.I)
    c = p.focal_point
    half_width = extent * (p.abs_a + p.abs_b)
    axis = np.linspace(-half_width, half_width, samples)
    grid = (axis[:, None] + 1j * axis[None, :]).ravel()
    excess = np.abs(grid - c) + np.abs(grid + c) - 2.0 * abs(c)
    keep = excess > 1e-9 * abs(c)
    ratios = [
        abs(roots.zeta_plus - roots.zeta_minus) / math.sqrt(gap)
        for roots, gap in ((char_roots_I(complex(z), p), float(e)) for z, e in zip(grid[keep], excess[keep]))
    ]
    smallest = min(ratios)
    floor = math.sqrt(abs(c)) / p.abs_a
    return CalibrationResult(
        name="root_separation",
        value=smallest,
        raw=smallest,
        samples=len(ratios),
        detail={"infimum": floor},
    )


def calibrate_z_norm_constant(
    p: SymbolParams,
    ns: Sequence[int] = (20, 50, 100),
    *,
    radii: Sequence[float] = DEFAULT_RADII,
    angles: int = DEFAULT_ANGLES,
    focal_margin: float = DEFAULT_FOCAL_MARGIN,
) -> CalibrationResult:
    """Menor ``c₀`` com ``c₀⁻¹F_N(|ζ₋|) ≤ |Z| ≤ c₀F_N(|ζ₋|)`` na varredura."""

    points = probe_grid(p, radii, angles, focal_margin)
    worst = 1.0
    count = 0
    for n in ns:
        spec = OperatorSpec(n, p)
        for z in points:
            growth = F_geom(n, abs(char_roots_I(complex(z), p).zeta_minus)).real
            norm = Z_vector(complex(z), spec, focal_margin=focal_margin).norm
            worst = max(worst, norm / growth, growth / norm)
            count += 1
    return CalibrationResult(name="z_norm", value=worst, raw=worst, samples=count, detail={})


__all__ = [
    "CalibrationResult",
    "calibrate_acceptance_constant",
    "calibrate_phi_constant",
    "calibrate_root_gap_constant",
    "calibrate_root_separation_constant",
    "calibrate_z_norm_constant",
    "probe_grid",
]
