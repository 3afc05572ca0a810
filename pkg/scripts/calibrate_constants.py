"""Executa os pilotos que fixam as constantes O(1) e grava o resultado em JSON."""

from __future__ import annotations

import argparse
from dataclasses import asdict
from pathlib import Path

from toeplitz_spectra import OperatorSpec, PerturbationConfig, SymbolParams
from toeplitz_spectra.calibration import (
    calibrate_acceptance_constant,
    calibrate_phi_constant,
    calibrate_root_gap_constant,
    calibrate_root_separation_constant,
    calibrate_z_norm_constant,
)
from toeplitz_spectra.settings import get_settings
from toeplitz_spectra.utils import configure_logging, write_json


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Calibrar constantes de aceitação")
    parser.add_argument("--out", type=Path, default=Path("calibration.json"), help="Arquivo JSON de saída")
    parser.add_argument("--seed", type=int, default=0, help="Semente mestra dos pilotos")
    parser.add_argument("--phi-trials", type=int, default=1000, help="Ensaios do piloto de φ")
    parser.add_argument("--count-trials", type=int, default=50, help="Ensaios por N do piloto de contagem")
    parser.add_argument("--jobs", type=int, default=None, help="Ensaios concorrentes")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    settings = get_settings()
    configure_logging(settings.log_level)
    jobs = args.jobs or settings.jobs
    params = SymbolParams(1 + 1j, 0.5)

    phi_config = PerturbationConfig.from_kappa(
        OperatorSpec(100, params), 2.6, master_seed=args.seed, trials=args.phi_trials
    )
    results = [
        calibrate_phi_constant(phi_config, jobs=jobs, progress=settings.progress),
        calibrate_acceptance_constant(
            params, trials=args.count_trials, master_seed=args.seed, jobs=jobs, progress=settings.progress
        ),
        calibrate_root_gap_constant(params),
        calibrate_root_separation_constant(params),
        calibrate_z_norm_constant(params),
    ]
    write_json({result.name: asdict(result) for result in results}, args.out)
    for result in results:
        print(f"{result.name}: {result.value:.4g} (bruto {result.raw:.4g}, {result.samples} amostras)")


if __name__ == "__main__":
    main()
