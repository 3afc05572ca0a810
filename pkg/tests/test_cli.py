from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest

from toeplitz_spectra import __version__
from toeplitz_spectra.cli import EXIT_GATE, EXIT_OK, EXIT_USAGE, main
from toeplitz_spectra.config import format_complex, parse_complex
from toeplitz_spectra.symbol import SymbolParams
from toeplitz_spectra.toeplitz import OperatorSpec, exact_spectrum_I
from toeplitz_spectra.utils import sha256_file


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_spectrum_of_two_by_two(tmp_path):
    assert main(["spectrum", "-N", "2", "-a", "1", "-b", "1", "--out", str(tmp_path)]) == EXIT_OK
    frame = pd.read_csv(tmp_path / "eigenvalues.csv")
    np.testing.assert_allclose(frame["re"], [-1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(frame["im"], [0.0, 0.0], atol=1e-12)
    assert (tmp_path / "closed_form_spectrum.csv").exists()
    svg = (tmp_path / "spectrum.svg").read_text(encoding="utf-8")
    assert f"toeplitz-spectra {__version__}" in svg
    manifest = _read_json(tmp_path / "manifest.json")
    assert manifest["command"] == "spectrum"
    assert manifest["artifacts"]["eigenvalues.csv"] == sha256_file(tmp_path / "eigenvalues.csv")


def test_spectrum_case_II_collapses(tmp_path):
    argv = ["spectrum", "--case", "II", "-N", "10", "-a", "1i", "-b", "0.5", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    frame = pd.read_csv(tmp_path / "eigenvalues.csv")
    assert np.max(np.hypot(frame["re"], frame["im"])) <= 1e-4
    assert not (tmp_path / "closed_form_spectrum.csv").exists()


def test_symbol_rejects_zero_coefficient(tmp_path, capsys):
    assert main(["symbol", "-a", "1", "-b", "0", "--out", str(tmp_path)]) == EXIT_USAGE
    assert "erro" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--bogus", "--out", str(tmp_path)])
    assert info.value.code == EXIT_USAGE


def test_symbol_case_II_markers(tmp_path):
    argv = ["symbol", "--case", "II", "-a", "0.4i", "-b", "0.5", "--samples", "64", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    manifest = _read_json(tmp_path / "manifest.json")
    assert manifest["markers"]["regime"] == "SelfIntersecting"
    assert "self_intersection" in manifest["markers"]
    assert len(pd.read_csv(tmp_path / "curve.csv")) == 64


def test_symbol_overlay_columns(tmp_path):
    argv = ["symbol", "-a", "1+1i", "-b", "0.5", "--overlay-a", "2", "--samples", "32", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert {"overlay_re", "overlay_im"} <= set(pd.read_csv(tmp_path / "curve.csv").columns)


def test_count_requires_trials(tmp_path):
    assert main(["count", "--trials", "0", "--kappa", "3", "--out", str(tmp_path)]) == EXIT_USAGE


def test_count_reports_gate_violation(tmp_path, capsys):
    assert main(["count", "-N", "100", "--out", str(tmp_path)]) == EXIT_GATE
    assert "δ = 0" in capsys.readouterr().err


def test_count_is_reproducible(tmp_path):
    argv = ["count", "-N", "100", "--kappa", "3", "--trials", "3", "--seed", "5"]
    first, second, rerun = tmp_path / "first", tmp_path / "second", tmp_path / "rerun"
    assert main(argv + ["--out", str(first)]) == EXIT_OK
    assert main(argv + ["--out", str(second), "--jobs", "2"]) == EXIT_OK
    assert main(["count", "--config", str(first / "manifest.json"), "--out", str(rerun)]) == EXIT_OK
    report = (first / "count_report.json").read_bytes()
    assert (second / "count_report.json").read_bytes() == report
    assert (rerun / "count_report.json").read_bytes() == report

    data = _read_json(first / "count_report.json")
    assert list(data) == [
        "n", "a", "b", "delta", "kappa", "seed", "trials", "arc",
        "theoretical", "per_trial", "mean", "std", "bound_rhs", "pass_fraction",
    ]
    assert data["arc"]["mode"] == "PiProjection"
    assert data["seed"] == 5 and len(data["per_trial"]) == 3
    assert data["theoretical"] == pytest.approx(100.0)
    assert _read_json(first / "count_diagnostics.json")["theorem_regime"] is True


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("TOEPLITZ_SPECTRA_SEED", "7")
    assert main(["spectrum", "-N", "8", "--delta", "1e-3", "--out", str(tmp_path)]) == EXIT_OK
    assert _read_json(tmp_path / "manifest.json")["seed"] == 7


def test_range_with_three_angles(tmp_path):
    assert main(["range", "-N", "10", "--n-angles", "3", "--out", str(tmp_path)]) == EXIT_OK
    assert len(pd.read_csv(tmp_path / "range.csv")) == 3
    assert _read_json(tmp_path / "manifest.json")["check"]["contained"] is True


def test_range_case_II_inside_disc(tmp_path):
    argv = ["range", "--case", "II", "-N", "12", "-a", "1i", "--n-angles", "16", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    assert _read_json(tmp_path / "manifest.json")["check"]["contained"] is True


def test_grushin_without_probes(tmp_path):
    assert main(["grushin", "-N", "10", "--out", str(tmp_path)]) == EXIT_OK
    assert _read_json(tmp_path / "report.json")["records"] == []


def test_grushin_probes(tmp_path):
    spec = OperatorSpec(10, SymbolParams(1 + 1j, 0.5))
    eigenvalue = exact_spectrum_I(spec)[2]
    argv = ["grushin", "-N", "10", f"--probe={format_complex(eigenvalue)}", "--probe=3", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    on_spectrum, exterior = _read_json(tmp_path / "report.json")["records"]
    assert abs(parse_complex(on_spectrum["e_mp"])) <= 1e-10
    assert on_spectrum["flag"] == "focal_segment"
    assert exterior["bound_ratio"] >= 1.0
    assert exterior["region"] == "Exterior"


def test_grushin_records_perturbed_values(tmp_path):
    argv = ["grushin", "-N", "20", "--kappa", "3", "--probe=0.5i", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    (record,) = _read_json(tmp_path / "report.json")["records"]
    assert "e_mp_perturbed" in record and "e_mp_first_order" in record
    assert record["norm_E"] <= record["bound_E"]
