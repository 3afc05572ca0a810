"""Interface de linha de comando: espectros, curvas de símbolo, contagens, imagem numérica e Grushin."""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .config import FIELD_NAMES, RunConfig, build_run_config, load_config
from .counting import CountReport, eigenvalue_count_mc
from .errors import ConfigError, GateViolation, NumericalError, RegimeError, ToeplitzSpectraError
from .grushin import (
    e_mp,
    grushin_inverse_closed_form,
    norm_bounds_interior,
    resolvent_norm_bound_exterior,
    resolvent_norm_bound_exterior_sharp,
)
from .numerics import RngStream, eig, log_det, operator_norm
from .perturbation import E_mp_first_order, perturbed_grushin_exact, sample_Q
from .settings import get_settings
from .svg import SvgPlot
from .symbol import (
    Case,
    RegionI,
    case2_curve_decomposition,
    char_roots_I,
    classify_I,
    ellipse_point,
    symbol_I,
    symbol_II,
)
from .toeplitz import build_P, det_closed_form, exact_spectrum_I, numerical_range_boundary, resolvent_norm
from .utils import configure_logging, write_csv, write_json, write_manifest, write_text

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_GATE = 3
MIN_SYMBOL_SAMPLES = 16
HULL_TOLERANCE = 1e-6
DISC_TOLERANCE = 1e-8


class _Parser(argparse.ArgumentParser):
    """Erros de uso saem com código 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: erro: {message}\n")


def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--case", choices=[c.value for c in Case], help="Caso do símbolo (I ou II)")
    shared.add_argument("-N", dest="n", type=int, help="Dimensão da matriz")
    shared.add_argument("-a", help="Coeficiente a na sintaxe re+imi (ex. 1+1i)")
    shared.add_argument("-b", help="Coeficiente b; valores negativos como -b=-0.5i")
    shared.add_argument("--delta", type=float, help="Intensidade δ da perturbação")
    shared.add_argument("--kappa", type=float, help="Expoente κ; δ = N^-κ quando --delta não é dado")
    shared.add_argument("--seed", type=int, help="Semente mestra (fallback: TOEPLITZ_SPECTRA_SEED)")
    shared.add_argument("--trials", type=int, help="Número de ensaios")
    shared.add_argument("--out", type=Path, help="Diretório de saída")
    shared.add_argument("--jobs", type=int, help="Ensaios concorrentes")
    shared.add_argument("--config", type=Path, help="Arquivo YAML de configuração (ou manifest.json)")
    shared.add_argument("--log-level", help="Nível de log (padrão: LOG_LEVEL ou WARNING)")
    return shared


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toeplitz-spectra", description="Análise espectral de matrizes de Toeplitz bidiagonais")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    shared = _shared_flags()

    spectrum = sub.add_parser("spectrum", parents=[shared], help="Autovalores de P ou P_δ e gráfico com a curva do símbolo")
    spectrum.add_argument("--samples", type=int, help="Pontos da curva do símbolo")

    symbol = sub.add_parser("symbol", parents=[shared], help="Curva imagem de S¹ pelo símbolo")
    symbol.add_argument("--samples", type=int, help="Pontos da curva")
    symbol.add_argument("--overlay-a", dest="overlay_a", help="Segundo valor de a sobreposto no gráfico")

    count = sub.add_parser("count", parents=[shared], help="Contagem de autovalores em Γ(r, γ) contra a lei de Weyl")
    count.add_argument("--xi-lo", dest="xi_lo", type=float, help="Início do arco em ξ")
    count.add_argument("--xi-hi", dest="xi_hi", type=float, help="Fim do arco em ξ")
    count.add_argument("-r", dest="r", type=float, help="Raio da região")
    count.add_argument("--mode", choices=["PiProjection", "DistanceEquality"], help="Modo de pertinência")
    count.add_argument("--delta0", dest="delta_0", type=float, help="Expoente δ₀")
    count.add_argument("--c-acc", dest="c_acc", type=float, help="Constante de aceitação")
    count.add_argument("--no-gates", dest="enforce_gates", action="store_const", const=False, help="Executa fora do regime")

    numerical_range = sub.add_parser("range", parents=[shared], help="Fronteira da imagem numérica")
    numerical_range.add_argument("--n-angles", dest="n_angles", type=int, help="Número de direções")
    numerical_range.add_argument("--samples", type=int, help="Pontos da elipse E₁")

    grushin = sub.add_parser("grushin", parents=[shared], help="Diagnóstico do problema de Grushin em sondas z")
    grushin.add_argument("--probe", dest="probes", action="append", help="Sonda z (repetível)")
    return parser


def _flag_values(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in vars(args).items() if key in FIELD_NAMES and value is not None}


def _artifact_paths(out: Path, names: Sequence[str]) -> Dict[str, Path]:
    return {name: out / name for name in names}


def _sorted_points(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.complex128)
    return values[np.lexsort((values.imag, values.real))]


def _symbol_curve(cfg: RunConfig, a: Optional[complex] = None) -> np.ndarray:
    params = cfg.symbol_params() if a is None else RunConfig(case=cfg.case, a=a, b=cfg.b).symbol_params()
    xi = 2.0 * np.pi * np.arange(cfg.samples) / cfg.samples
    return symbol_I(xi, params) if params.case is Case.I else symbol_II(xi, params)


def cmd_spectrum(cfg: RunConfig, *, progress: bool = False) -> Dict[str, Path]:
    spec = cfg.operator_spec()
    delta = cfg.resolved_delta
    matrix = build_P(spec)
    if delta > 0:
        matrix = matrix + delta * sample_Q(spec.n, RngStream(cfg.seed or 0, 0))
    eigenvalues = _sorted_points(eig(matrix))

    out = cfg.out
    paths = {"eigenvalues.csv": write_csv({"re": eigenvalues.real, "im": eigenvalues.imag}, out / "eigenvalues.csv")}
    if delta == 0 and spec.case is Case.I:
        exact = exact_spectrum_I(spec)
        paths["closed_form_spectrum.csv"] = write_csv(
            {"nu": np.arange(1, spec.n + 1), "re": exact.real, "im": exact.imag}, out / "closed_form_spectrum.csv"
        )

    plot = SvgPlot(title=f"N={spec.n}, a={cfg.a}, b={cfg.b}, δ={delta:g}", version=__version__)
    plot.add_curve(_symbol_curve(cfg))
    plot.add_points(eigenvalues)
    mapping = plot.affine_map()
    paths["spectrum.svg"] = write_text(plot.render(mapping), out / "spectrum.svg")
    write_manifest(out, "spectrum", __version__, cfg.to_parameters(), paths, {"svg": {"spectrum.svg": mapping}})
    print(f"{spec.n} autovalores gravados em {paths['eigenvalues.csv']}")
    return paths


def cmd_symbol(cfg: RunConfig, *, progress: bool = False) -> Dict[str, Path]:
    if cfg.samples < MIN_SYMBOL_SAMPLES:
        raise ConfigError(f"samples deve ser ≥ {MIN_SYMBOL_SAMPLES}, recebido {cfg.samples}")
    params = cfg.symbol_params()
    xi = 2.0 * np.pi * np.arange(cfg.samples) / cfg.samples
    curve = _symbol_curve(cfg)
    columns: Dict[str, Any] = {"xi": xi, "re": curve.real, "im": curve.imag}
    plot = SvgPlot(title=f"Caso {params.case.value}: a={cfg.a}, b={cfg.b}", version=__version__)
    plot.add_curve(curve)
    if cfg.overlay_a is not None:
        overlay = _symbol_curve(cfg, cfg.overlay_a)
        columns.update({"overlay_re": overlay.real, "overlay_im": overlay.imag})
        plot.add_curve(overlay, color="#1f4e9c")

    markers: Dict[str, Any] = {}
    if params.case is Case.II:
        decomposition = case2_curve_decomposition(params, cfg.samples)
        markers["regime"] = decomposition.regime
        markers["f_zeta_c"] = decomposition.f_zeta_c
        plot.add_marker(decomposition.f_zeta_c, "f(ζc)")
        if decomposition.cusp is not None:
            markers["cusp"] = decomposition.cusp
            plot.add_marker(decomposition.cusp, "cúspide")
        if decomposition.self_intersection is not None:
            markers["self_intersection"] = decomposition.self_intersection
            plot.add_marker(decomposition.self_intersection, "autointerseção", color="#9467bd")

    out = cfg.out
    paths = {"curve.csv": write_csv(columns, out / "curve.csv")}
    mapping = plot.affine_map()
    paths["curve.svg"] = write_text(plot.render(mapping), out / "curve.svg")
    write_manifest(out, "symbol", __version__, cfg.to_parameters(), paths, {"svg": {"curve.svg": mapping}, "markers": markers})
    print(f"curva do símbolo gravada em {paths['curve.csv']}")
    return paths


def count_report_json(report: CountReport) -> Dict[str, Any]:
    return {
        "n": report.n,
        "a": report.a,
        "b": report.b,
        "delta": report.delta,
        "kappa": report.kappa,
        "seed": report.seed,
        "trials": report.trials,
        "arc": {
            "xi_lo": report.region.xi_lo,
            "xi_hi": report.region.xi_hi,
            "r": report.region.r,
            "mode": report.region.mode,
        },
        "theoretical": report.theoretical,
        "per_trial": list(report.per_trial),
        "mean": report.mean,
        "std": report.std,
        "bound_rhs": report.bound_rhs,
        "pass_fraction": report.pass_fraction,
    }


def cmd_count(cfg: RunConfig, *, progress: bool = False) -> Dict[str, Path]:
    config = cfg.perturbation_config()
    report = eigenvalue_count_mc(
        config,
        cfg.arc_region(),
        cfg.delta_0,
        c_acc=cfg.c_acc,
        enforce_gates=cfg.enforce_gates,
        jobs=cfg.jobs,
        progress=progress,
    )
    out = cfg.out
    paths = {"count_report.json": write_json(count_report_json(report), out / "count_report.json")}
    diagnostics = {
        "theorem_regime": report.theorem_regime,
        "gate_violations": list(report.gate_violations),
        "probability_floor": report.probability_floor,
        "exterior_per_trial": list(report.exterior_per_trial),
        "exterior_bound": report.exterior_bound,
        "exterior_pass_fraction": report.exterior_pass_fraction,
        "stray_per_trial": list(report.stray_per_trial),
    }
    paths["count_diagnostics.json"] = write_json(diagnostics, out / "count_diagnostics.json")
    write_manifest(out, "count", __version__, cfg.to_parameters(), paths)
    print(f"contagem: média {report.mean:.3f}, teórico {report.theoretical:.3f}, aprovados {report.pass_fraction:.2%}")
    return paths


def cmd_range(cfg: RunConfig, *, progress: bool = False) -> Dict[str, Path]:
    spec = cfg.operator_spec()
    params = spec.params
    points = numerical_range_boundary(spec, cfg.n_angles)
    theta = 2.0 * np.pi * np.arange(cfg.n_angles) / cfg.n_angles
    radius = params.abs_a + params.abs_b

    plot = SvgPlot(title=f"Imagem numérica, N={spec.n}", version=__version__)
    eta = 2.0 * np.pi * np.arange(cfg.samples) / cfg.samples
    if params.case is Case.I:
        c = params.focal_point
        excess = float(np.max(np.abs(points - c) + np.abs(points + c) - 2.0 * radius))
        contained = excess <= HULL_TOLERANCE
        plot.add_curve(np.atleast_1d(ellipse_point(eta, params)) if params.abs_b <= params.abs_a else symbol_I(eta, params))
        check = {"test": "fecho de E1", "max_excess": excess, "contained": contained}
    else:
        excess = float(np.max(np.abs(points)) - radius)
        contained = excess <= DISC_TOLERANCE
        plot.add_curve(radius * np.exp(1j * eta), color="#bbbbbb")
        plot.add_curve(symbol_II(eta, params))
        check = {"test": "disco D(0, |a|+|b|)", "max_excess": excess, "contained": contained}
    plot.add_points(points)

    out = cfg.out
    paths = {"range.csv": write_csv({"theta": theta, "re": points.real, "im": points.imag}, out / "range.csv")}
    mapping = plot.affine_map()
    paths["range.svg"] = write_text(plot.render(mapping), out / "range.svg")
    write_manifest(out, "range", __version__, cfg.to_parameters(), paths, {"svg": {"range.svg": mapping}, "check": check})
    print(f"imagem numérica contida ({check['test']}): {'sim' if contained else 'não'}; excesso máximo {excess:.3e}")
    return paths


def grushin_record(z: complex, cfg: RunConfig, Q: Optional[np.ndarray]) -> Dict[str, Any]:
    """Diagnóstico de uma sonda; falhas de regime ficam no próprio registro."""

    spec = cfg.operator_spec()
    params = spec.params
    record: Dict[str, Any] = {"z": z}
    try:
        roots = char_roots_I(z, params)
        record["zeta_plus"] = roots.zeta_plus
        record["zeta_minus"] = roots.zeta_minus
        record["e_mp"] = e_mp(z, spec)
        record["det_closed_form"] = det_closed_form(z, spec)
        phase, log_abs = log_det(build_P(spec) - z * np.eye(spec.n))
        record["det_numeric"] = 0j if math.isinf(log_abs) else phase * math.exp(log_abs)
        record["log_abs_det_numeric"] = log_abs
        region = classify_I(z, params, refine_focal=True) if params.abs_b <= params.abs_a else None
        record["region"] = region
        if region is RegionI.FOCAL_SEGMENT:
            record["flag"] = "focal_segment"
        elif abs(roots.zeta_minus) < 1.0:
            blocks = grushin_inverse_closed_form(z, spec)
            bounds = norm_bounds_interior(z, spec)
            record["norm_E"] = operator_norm(blocks.E)
            record["bound_E"] = bounds.bound_E
            record["norm_E_plus"] = float(np.linalg.norm(blocks.E_plus))
            record["bound_Epm"] = bounds.bound_Epm
            record["abs_E_mp"] = abs(blocks.E_mp)
            record["bound_Emp"] = bounds.bound_Emp
        else:
            actual = resolvent_norm(z, spec)
            bound = resolvent_norm_bound_exterior(z, spec)
            record["resolvent_norm"] = actual
            record["resolvent_bound"] = bound
            record["resolvent_bound_sharp"] = resolvent_norm_bound_exterior_sharp(z, spec)
            record["bound_ratio"] = bound / actual
        if Q is not None:
            record["e_mp_perturbed"] = perturbed_grushin_exact(z, Q, cfg.resolved_delta, spec, check=False).E_mp
            record["e_mp_first_order"] = E_mp_first_order(z, Q, cfg.resolved_delta, spec)
    except (RegimeError, NumericalError) as exc:
        LOGGER.warning("sonda sinalizada", extra={"z": str(z), "error": str(exc)})
        record["error"] = str(exc)
    return record


def cmd_grushin(cfg: RunConfig, *, progress: bool = False) -> Dict[str, Path]:
    spec = cfg.operator_spec()
    if spec.case is not Case.I:
        raise RegimeError("o problema de Grushin só está definido no caso I")
    delta = cfg.resolved_delta
    Q = sample_Q(spec.n, RngStream(cfg.seed or 0, 0)) if delta > 0 else None
    records: List[Dict[str, Any]] = [grushin_record(z, cfg, Q) for z in cfg.probes]
    report = {"n": spec.n, "a": cfg.a, "b": cfg.b, "delta": delta, "seed": cfg.seed, "records": records}
    out = cfg.out
    paths = {"report.json": write_json(report, out / "report.json")}
    write_manifest(out, "grushin", __version__, cfg.to_parameters(), paths)
    print(f"{len(records)} sondas gravadas em {paths['report.json']}")
    return paths


COMMANDS: Dict[str, Callable[..., Dict[str, Path]]] = {
    "spectrum": cmd_spectrum,
    "symbol": cmd_symbol,
    "count": cmd_count,
    "range": cmd_range,
    "grushin": cmd_grushin,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
        configure_logging(args.log_level or settings.log_level)
        file_values = load_config(args.config) if args.config else {}
        cfg = build_run_config({"jobs": settings.jobs}, file_values, _flag_values(args), env_seed=settings.seed)
        COMMANDS[args.command](cfg, progress=settings.progress)
    except GateViolation as exc:
        print(f"erro: hipóteses violadas: {exc}", file=sys.stderr)
        return EXIT_GATE
    except ConfigError as exc:
        print(f"erro: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegimeError, NumericalError) as exc:
        print(f"erro numérico: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ToeplitzSpectraError as exc:
        print(f"erro: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
