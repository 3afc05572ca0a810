"""Reproduz as duas figuras: espectro perturbado com a elipse E₁ e curvas dos símbolos."""

from __future__ import annotations

import argparse
from pathlib import Path

from toeplitz_spectra.cli import main as cli_main


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Reproduzir as figuras de espectro e de símbolo")
    parser.add_argument("--out", type=Path, default=Path("figures"), help="Diretório de saída")
    parser.add_argument("--seed", type=int, default=7, help="Semente do ensemble perturbado")
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    runs = {
        "spectrum": ["spectrum", "--case", "I", "-N", "500", "-a", "1+1i", "-b", "0.5", "--delta", "1e-5"],
        "symbol_case_I": ["symbol", "--case", "I", "-a", "1+1i", "-b", "0.5", "--overlay-a", "0.5+0.5i"],
        "symbol_case_II": ["symbol", "--case", "II", "-a", "1i", "-b", "0.5", "--overlay-a", "0.4i"],
    }
    for name, argv in runs.items():
        code = cli_main([*argv, "--seed", str(args.seed), "--out", str(args.out / name)])
        if code != 0:
            raise SystemExit(code)
    print(f"Figuras gravadas em: {args.out}")


if __name__ == "__main__":
    main()
