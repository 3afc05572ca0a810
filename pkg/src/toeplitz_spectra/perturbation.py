"""Perturbações gaussianas ``P_δ = P₀ + δQ_ω`` e o problema de Grushin perturbado."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats
from scipy.optimize import brentq
from tqdm import tqdm

from .errors import ConfigError, RegimeError, ToeplitzSpectraError
from .grushin import (
    F_geom,
    GrushinInverse,
    build_calP,
    geom_coeffs,
    grushin_blocks,
    grushin_inverse_closed_form,
)
from .numerics import RngStream, eig, hs_norm, log_abs_det, operator_norm, solve, trace_norm
from .symbol import Case, char_roots_I, dist_to_focal_segment, require_case
from .toeplitz import OperatorSpec, build_P

LOGGER = logging.getLogger(__name__)

DEFAULT_C1 = 2.0
DEFAULT_C_PHI = 6.0
DEFAULT_DELTA_0 = 0.2
DEFAULT_GATE_OFFSET = 1.0
DEFAULT_FOCAL_MARGIN = 0.1
PRECONDITION_LIMIT = 0.5


@dataclass(frozen=True)
class PerturbationConfig:
    """Parâmetros de um ensemble ``P₀ + δQ_ω``.

    ``kappa`` registra ``δ = N^{−κ}`` quando o ensemble foi construído assim;
    ``None`` indica um ``δ`` livre.
    """

    spec: OperatorSpec
    delta: float
    kappa: Optional[float] = None
    master_seed: int = 0
    trials: int = 1

    def __post_init__(self) -> None:
        delta = float(self.delta)
        if not math.isfinite(delta) or delta < 0:
            raise ConfigError(f"delta deve ser finito e ≥ 0, recebido {self.delta!r}")
        object.__setattr__(self, "delta", delta)
        if self.kappa is not None:
            kappa = float(self.kappa)
            if not math.isfinite(kappa):
                raise ConfigError(f"kappa deve ser finito, recebido {self.kappa!r}")
            object.__setattr__(self, "kappa", kappa)
        if int(self.master_seed) < 0 or int(self.master_seed) >= 2**64:
            raise ConfigError(f"semente fora de [0, 2^64): {self.master_seed}")
        if int(self.trials) < 1:
            raise ConfigError(f"trials deve ser ≥ 1, recebido {self.trials}")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "trials", int(self.trials))

    @classmethod
    def from_kappa(
        cls, spec: OperatorSpec, kappa: float, *, master_seed: int = 0, trials: int = 1
    ) -> "PerturbationConfig":
        """``δ = N^{−κ}``."""

        return cls(spec=spec, delta=float(spec.n) ** (-float(kappa)), kappa=kappa, master_seed=master_seed, trials=trials)

    @property
    def n(self) -> int:
        return self.spec.n

    def stream(self, trial_index: int) -> RngStream:
        return RngStream(self.master_seed, trial_index)


@dataclass(frozen=True)
class TrialRecord:
    """Dados de uma sonda ``z`` em um ensaio."""

    z: complex
    log_abs_det: float
    e_mp_exact: Optional[complex] = None
    e_mp_first_order: Optional[complex] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    hs_norm_Q: float
    eigenvalues: np.ndarray
    records: Tuple[TrialRecord, ...] = field(default_factory=tuple)

    def record_for(self, z: complex) -> Optional[TrialRecord]:
        for record in self.records:
            if record.z == complex(z):
                return record
        return None


def sample_Q(n: int, stream: RngStream) -> np.ndarray:
    """Matriz ``n×n`` de entradas gaussianas complexas i.i.d."""

    if n < 1:
        raise ConfigError(f"N deve ser ≥ 1, recebido {n}")
    return np.asarray(stream.complex_gaussian((n, n)), dtype=np.complex128)


def _perturb(spec: OperatorSpec, Q: np.ndarray, delta: float) -> np.ndarray:
    matrix = build_P(spec)
    if delta == 0:
        return matrix
    return matrix + delta * Q


def build_P_delta(config: PerturbationConfig, stream: RngStream) -> np.ndarray:
    return _perturb(config.spec, sample_Q(config.n, stream), config.delta)


def perturbed_grushin_exact(
    z: complex, Q: np.ndarray, delta: float, spec: OperatorSpec, *, check: bool = True
) -> GrushinInverse:
    """Inversa do sistema aumentado com ``P_δ`` no lugar de ``P₀``, por resolução densa.

    Com ``check=True`` exige ``δ‖Q‖‖E⁰‖ < 1/2``.
    """

    require_case(spec.params, Case.I)
    n = spec.n
    if check:
        unperturbed = grushin_inverse_closed_form(z, spec)
        theta = delta * operator_norm(Q) * operator_norm(unperturbed.E)
        if theta >= PRECONDITION_LIMIT:
            raise RegimeError(f"δ‖Q‖‖E⁰‖ = {theta:.4g} ≥ 1/2 em z={z}; série de Neumann não garantida")
    system = build_calP(z, spec)
    system[1:, :n] += delta * np.asarray(Q, dtype=np.complex128)
    inverse = solve(system, np.eye(n + 1, dtype=np.complex128))
    return grushin_blocks(inverse)


def E_mp_first_order(z: complex, Q: np.ndarray, delta: float, spec: OperatorSpec) -> complex:
    """``E₋₊⁰ − δ·E₋⁰QE₊⁰``."""

    blocks = grushin_inverse_closed_form(z, spec)
    return blocks.E_mp - delta * complex(blocks.E_minus @ (Q @ blocks.E_plus))


def E_mp_first_order_double_sum(z: complex, Q: np.ndarray, delta: float, spec: OperatorSpec) -> complex:
    """Mesmo termo de primeira ordem pela soma dupla ``Σ_{j,k} c_{N−1−j} q_{j,k} c_k``."""

    c = geom_coeffs(z, spec).c
    n = spec.n
    left = c[n - 1 :: -1]
    right = c[:n]
    correction = np.sum(left[:, None] * np.asarray(Q) * right[None, :])
    return complex(c[n]) - delta * complex(correction)


class ZVector(NamedTuple):
    matrix: np.ndarray
    norm: float


def Z_vector(
    z: complex, spec: OperatorSpec, *, strict: bool = True, focal_margin: float = DEFAULT_FOCAL_MARGIN
) -> ZVector:
    """Matriz de posto um ``Z_{j,k} = c_{N−1−j}c_k`` com ``E₋⁰QE₊⁰ = (Q | Z̄)`` e sua norma HS.

    Com ``strict=True`` rejeita ``z`` a menos de ``focal_margin`` do segmento focal.
    """

    require_case(spec.params, Case.I)
    if strict:
        gap = dist_to_focal_segment(z, spec.params)
        if gap < focal_margin:
            raise RegimeError(f"z={z} a {gap:.3g} do segmento focal (margem {focal_margin})")
    c = geom_coeffs(z, spec).c
    n = spec.n
    left = c[n - 1 :: -1]
    right = c[:n]
    matrix = np.outer(left, right)
    return ZVector(matrix=matrix, norm=float(np.linalg.norm(left) * np.linalg.norm(right)))


def clopper_pearson(successes: int, trials: int, level: float = 0.99) -> Tuple[float, float]:
    """Intervalo binomial exato bilateral."""

    if trials < 1 or not 0 <= successes <= trials:
        raise ConfigError(f"contagem inválida: {successes}/{trials}")
    alpha = 1.0 - level
    lower = 0.0 if successes == 0 else float(stats.beta.ppf(alpha / 2, successes, trials - successes + 1))
    upper = 1.0 if successes == trials else float(stats.beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lower, upper


@dataclass(frozen=True)
class LemmaReport:
    z: complex
    t: float
    delta: float
    trials: int
    successes: int
    empirical_prob: float
    bound: float
    slack: float
    z_norm: float
    e_mp_unperturbed: complex
    interval: Tuple[float, float]
    holds: bool
    skipped: bool = False
    reason: Optional[str] = None


def small_value_probability_mc(
    z: complex,
    config: PerturbationConfig,
    t: float,
    *,
    c1: float = DEFAULT_C1,
    hypothesis_constant: float = 1.0,
    level: float = 0.99,
    jobs: int = 1,
    progress: bool = False,
) -> LemmaReport:
    """Frequência de ``{‖Q‖_HS ≤ C₁N e |E₋₊^δ| ≤ t}`` comparada à cota de pequenez de ``E₋₊^δ``.

    A cota é ``e^{−N²} + (1 + F_N(|ζ₋|)Nδ)(1 − exp(−(t/(δ|Z|))²))``; ``slack`` é o
    fator ``F_N(|ζ₋|)Nδ``. O ensaio é pulado (``skipped=True``) quando
    ``|E₋₊⁰| > C·δ·F_N(|ζ₋|)``.
    """

    spec = config.spec
    require_case(spec.params, Case.I)
    n = spec.n
    delta = config.delta
    if t < 0:
        raise ConfigError(f"t deve ser ≥ 0, recebido {t}")
    unperturbed = grushin_inverse_closed_form(z, spec)
    roots = char_roots_I(z, spec.params)
    growth = F_geom(n, abs(roots.zeta_minus)).real
    z_norm = Z_vector(z, spec, strict=False).norm
    slack = growth * n * delta
    scale = delta * z_norm
    gaussian_part = 1.0 if scale == 0 else -math.expm1(-((t / scale) ** 2))
    bound = math.exp(-float(n) ** 2) + (1.0 + slack) * gaussian_part

    threshold = hypothesis_constant * delta * growth
    if abs(unperturbed.E_mp) > threshold:
        LOGGER.warning(
            "hipótese de pequenez violada; ensaio pulado",
            extra={"z": str(z), "e_mp": abs(unperturbed.E_mp), "threshold": threshold},
        )
        return LemmaReport(
            z=complex(z), t=float(t), delta=delta, trials=0, successes=0, empirical_prob=float("nan"),
            bound=bound, slack=slack, z_norm=z_norm, e_mp_unperturbed=unperturbed.E_mp,
            interval=(0.0, 1.0), holds=False, skipped=True,
            reason=f"|E₋₊⁰| = {abs(unperturbed.E_mp):.3e} > Cδ F_N(|ζ₋|) = {threshold:.3e}",
        )

    def one(index: int) -> bool:
        Q = sample_Q(n, config.stream(index))
        if hs_norm(Q) > c1 * n:
            return False
        value = perturbed_grushin_exact(z, Q, delta, spec, check=False).E_mp
        return abs(value) <= t

    hits = sum(_map_trials(one, config.trials, jobs=jobs, progress=progress, desc="lemma"))
    interval = clopper_pearson(hits, config.trials, level)
    holds = interval[0] <= bound
    LOGGER.info(
        "lema de pequenez avaliado",
        extra={"n": n, "delta": delta, "trials": config.trials, "hits": hits, "bound": bound},
    )
    return LemmaReport(
        z=complex(z), t=float(t), delta=delta, trials=config.trials, successes=hits,
        empirical_prob=hits / config.trials, bound=bound, slack=slack, z_norm=z_norm,
        e_mp_unperturbed=unperturbed.E_mp, interval=interval, holds=bool(holds),
    )


def phi(
    z: complex, spec: OperatorSpec, *, c_phi: float = DEFAULT_C_PHI, focal_margin: float = DEFAULT_FOCAL_MARGIN
) -> float:
    """``φ(z) = ln|a| + max(ln|ζ₋|, 0) + C/N``."""

    require_case(spec.params, Case.I)
    gap = dist_to_focal_segment(z, spec.params)
    if gap < focal_margin:
        raise RegimeError(f"z={z} a {gap:.3g} do segmento focal (margem {focal_margin})")
    roots = char_roots_I(z, spec.params)
    return math.log(spec.params.abs_a) + max(math.log(abs(roots.zeta_minus)), 0.0) + c_phi / spec.n


def interior_gate(z: complex, spec: OperatorSpec, kappa: float, gate_offset: float = DEFAULT_GATE_OFFSET) -> bool:
    """``|ζ₋| ≤ 1 − (κ/N)(ln N + gate_offset)``."""

    require_case(spec.params, Case.I)
    n = spec.n
    roots = char_roots_I(z, spec.params)
    return abs(roots.zeta_minus) <= 1.0 - (kappa / n) * (math.log(n) + gate_offset)


@dataclass(frozen=True)
class BandCheck:
    z: complex
    log_abs_det: float
    upper: float
    lower: Optional[float]
    upper_ok: bool
    lower_ok: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.lower_ok is not False


def log_det_band_check(
    trial: TrialResult,
    z: complex,
    config: PerturbationConfig,
    *,
    c_phi: float = DEFAULT_C_PHI,
    delta_0: float = DEFAULT_DELTA_0,
    gate_offset: float = DEFAULT_GATE_OFFSET,
    focal_margin: float = DEFAULT_FOCAL_MARGIN,
) -> BandCheck:
    """Confere ``ln|det(P_δ−z)|`` contra ``Nφ(z)`` e, se a porta interior vale, contra ``N(φ(z) − ε)``.

    ``ε = 2N^{δ₀}/N``. O valor vem do registro da sonda quando existe; caso
    contrário é somado sobre os autovalores do ensaio.
    """

    spec = config.spec
    n = spec.n
    record = trial.record_for(z)
    if record is not None:
        value = record.log_abs_det
    else:
        gaps = np.abs(np.asarray(trial.eigenvalues) - complex(z))
        value = float("-inf") if np.any(gaps == 0) else float(np.sum(np.log(gaps)))
    level = phi(z, spec, c_phi=c_phi, focal_margin=focal_margin)
    upper = n * level
    lower: Optional[float] = None
    lower_ok: Optional[bool] = None
    kappa = effective_kappa(config)
    if kappa is not None and interior_gate(z, spec, kappa, gate_offset):
        epsilon = 2.0 * n**delta_0 / n
        lower = n * (level - epsilon)
        lower_ok = value >= lower
    return BandCheck(z=complex(z), log_abs_det=value, upper=upper, lower=lower, upper_ok=value <= upper, lower_ok=lower_ok)


def band_delta_0_floor(n: int, kappa: float, *, c_phi: float = DEFAULT_C_PHI) -> float:
    """Menor ``δ₀`` com ``2N^{δ₀} ≥ C + κ ln N``.

    Para ``z`` interior, ``ln|det(P_δ − z)| − N ln|a|`` fica perto de ``ln(δ|Z|) ≈ −κ ln N``,
    e a cota inferior ``N(φ(z) − ε)`` está em ``N ln|a| + C − 2N^{δ₀}``. Abaixo deste
    expoente a cota inferior exige um valor acima do típico e falha em quase todo ensaio.
    """

    if n < 2:
        raise ConfigError(f"N deve ser ≥ 2, recebido {n}")
    return math.log((c_phi + kappa * math.log(n)) / 2.0) / math.log(n)


def effective_kappa(config: PerturbationConfig) -> Optional[float]:
    """``κ`` registrado ou ``−ln δ/ln N``; ``None`` para ``δ = 0``."""

    if config.kappa is not None:
        return config.kappa
    if config.delta <= 0 or config.n < 2:
        return None
    return -math.log(config.delta) / math.log(config.n)


def m_function(s, n: int):
    """``m(s) = s^N(1 − s)``."""

    s_arr = np.asarray(s, dtype=float)
    values = s_arr**n * (1.0 - s_arr)
    return float(values) if values.ndim == 0 else values


def s_max(n: int) -> float:
    """Ponto de máximo ``N/(N+1)`` de ``m``."""

    return n / (n + 1.0)


def s_delta(n: int, constant: float, delta: float) -> float:
    """Raiz ``s_δ ∈ (0, s_max]`` de ``m(s) = Cδ``, via ``brentq`` sobre ``N ln s + ln(1−s) − ln(Cδ)``."""

    target = constant * delta
    if target <= 0:
        raise ConfigError(f"Cδ deve ser positivo, recebido {target}")
    top = s_max(n)
    if target >= m_function(top, n):
        raise RegimeError(f"Cδ = {target:.3e} ≥ max m = {m_function(top, n):.3e}; sem raiz")
    log_target = math.log(target)

    def gap(s: float) -> float:
        return n * math.log(s) + math.log1p(-s) - log_target

    low = target ** (1.0 / n)
    if gap(low) >= 0:
        return low
    return float(brentq(gap, low, top, xtol=1e-15, rtol=4 * np.finfo(float).eps))


@dataclass(frozen=True)
class PerturbationBounds:
    theta: float
    bound_E: float
    bound_E_diff: float
    bound_Emp_diff: float
    second_order_remainder: float
    bound_log_det: float


def grushin_perturbation_bounds(z: complex, Q: np.ndarray, delta: float, spec: OperatorSpec) -> PerturbationBounds:
    """Cotas de Neumann para os blocos perturbados, com ``θ = δ‖Q‖‖E⁰‖ < 1/2``."""

    blocks = grushin_inverse_closed_form(z, spec)
    norm_E = operator_norm(blocks.E)
    norm_Q = operator_norm(Q)
    theta = delta * norm_Q * norm_E
    if theta >= PRECONDITION_LIMIT:
        raise RegimeError(f"θ = δ‖Q‖‖E⁰‖ = {theta:.4g} ≥ 1/2")
    norm_plus = float(np.linalg.norm(blocks.E_plus))
    norm_minus = float(np.linalg.norm(blocks.E_minus))
    return PerturbationBounds(
        theta=theta,
        bound_E=norm_E / (1.0 - theta),
        bound_E_diff=delta * norm_Q * norm_E**2 / (1.0 - theta) ** 2,
        bound_Emp_diff=2.0 * delta * norm_plus * norm_minus * norm_Q,
        second_order_remainder=6.0 * delta**2 * norm_Q**2 * norm_minus * norm_plus * norm_E,
        bound_log_det=delta * norm_E * trace_norm(Q) / (1.0 - theta),
    )


def _probe_record(z: complex, Q: np.ndarray, perturbed: np.ndarray, config: PerturbationConfig) -> TrialRecord:
    spec = config.spec
    value = log_abs_det(perturbed - complex(z) * np.eye(spec.n))
    if spec.case is not Case.I:
        return TrialRecord(z=complex(z), log_abs_det=value)
    try:
        exact = perturbed_grushin_exact(z, Q, config.delta, spec, check=False).E_mp
    except ToeplitzSpectraError as exc:  # registro por sonda; o ensaio continua
        return TrialRecord(z=complex(z), log_abs_det=value, note=str(exc))
    first = E_mp_first_order(z, Q, config.delta, spec)
    return TrialRecord(z=complex(z), log_abs_det=value, e_mp_exact=exact, e_mp_first_order=first)


def run_trial(config: PerturbationConfig, trial_index: int, probes: Sequence[complex] = ()) -> TrialResult:
    """Um ensaio: sorteia ``Q`` do fluxo ``(master_seed, trial_index)``, calcula ``σ(P_δ)`` e as sondas."""

    Q = sample_Q(config.n, config.stream(trial_index))
    perturbed = _perturb(config.spec, Q, config.delta)
    eigenvalues = eig(perturbed)
    records = tuple(_probe_record(z, Q, perturbed, config) for z in probes)
    return TrialResult(trial_index=trial_index, hs_norm_Q=hs_norm(Q), eigenvalues=eigenvalues, records=records)


def _map_trials(func, trials: int, *, jobs: int, progress: bool, desc: str) -> List:
    if jobs < 1:
        raise ConfigError(f"jobs deve ser ≥ 1, recebido {jobs}")
    results = {}
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        futures = {executor.submit(func, index): index for index in range(trials)}
        for future in tqdm(as_completed(futures), total=trials, desc=desc, disable=not progress):
            results[futures[future]] = future.result()
    return [results[index] for index in sorted(results)]


def run_trials(
    config: PerturbationConfig,
    probes: Iterable[complex] = (),
    *,
    jobs: int = 1,
    progress: bool = False,
) -> List[TrialResult]:
    """Executa ``config.trials`` ensaios independentes; resultados ordenados por ``trial_index``."""

    probe_list = [complex(z) for z in probes]
    LOGGER.info(
        "iniciando ensaios",
        extra={"n": config.n, "delta": config.delta, "seed": config.master_seed, "trials": config.trials, "jobs": jobs},
    )
    results = _map_trials(
        lambda index: run_trial(config, index, probe_list), config.trials, jobs=jobs, progress=progress, desc="trials"
    )
    LOGGER.info("ensaios concluídos", extra={"trials": len(results)})
    return results


__all__ = [
    "BandCheck",
    "E_mp_first_order",
    "E_mp_first_order_double_sum",
    "LemmaReport",
    "PerturbationBounds",
    "PerturbationConfig",
    "TrialRecord",
    "TrialResult",
    "ZVector",
    "Z_vector",
    "band_delta_0_floor",
    "build_P_delta",
    "effective_kappa",
    "clopper_pearson",
    "grushin_perturbation_bounds",
    "interior_gate",
    "small_value_probability_mc",
    "log_det_band_check",
    "m_function",
    "perturbed_grushin_exact",
    "phi",
    "run_trial",
    "run_trials",
    "s_delta",
    "s_max",
    "sample_Q",
]
