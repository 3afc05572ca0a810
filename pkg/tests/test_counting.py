from __future__ import annotations

import math

import numpy as np
import pytest

from toeplitz_spectra.counting import (
    ArcRegion,
    MembershipMode,
    delta_phi_arc_identity,
    empirical_count,
    exterior_count,
    gamma_membership,
    gamma_membership_many,
    probability_floor,
    stray_count,
    eigenvalue_count_mc,
    theorem_gate_violations,
    weyl_count,
)
from toeplitz_spectra.errors import ConfigError, GateViolation
from toeplitz_spectra.perturbation import PerturbationConfig, run_trials
from toeplitz_spectra.symbol import symbol_I
from toeplitz_spectra.toeplitz import OperatorSpec, exact_spectrum_I


def _outward_normal(xi: float, params) -> complex:
    direction = params.a * np.exp(1j * xi) - params.b * np.exp(-1j * xi)
    return direction / abs(direction)


def test_region_validation():
    with pytest.raises(ConfigError):
        ArcRegion(1.0, 0.0, 0.1)
    with pytest.raises(ConfigError):
        ArcRegion(0.0, 1.0, 0.0)
    with pytest.raises(ConfigError):
        ArcRegion(0.0, 7.0, 0.1)
    with pytest.raises(ConfigError):
        ArcRegion(0.0, 1.0, 0.1, "Nearest")
    assert ArcRegion(0.0, 1.0, 0.1, "DistanceEquality").mode is MembershipMode.DISTANCE_EQUALITY
    assert ArcRegion.full_circle(0.2).is_full


def test_region_gates():
    assert ArcRegion.full_circle(0.2).gate_violations(100) == []
    assert len(ArcRegion.full_circle(0.5).gate_violations(100)) == 1
    assert len(ArcRegion.full_circle(0.01).gate_violations(100)) == 1


@pytest.mark.parametrize("mode", list(MembershipMode))
def test_membership_examples(params, mode):
    region = ArcRegion(0.5, 1.5, 0.2, mode)
    on_arc = symbol_I(1.0, params)
    normal = _outward_normal(1.0, params)
    assert gamma_membership(on_arc, region, params)
    assert gamma_membership(on_arc - 0.1 * normal, region, params)
    assert gamma_membership(on_arc + 0.1 * normal, region, params)
    assert not gamma_membership(on_arc + 0.4 * normal, region, params)
    assert not gamma_membership(symbol_I(1.0 + math.pi, params), region, params)


def test_membership_modes_agree_away_from_endpoints(params, rng):
    xi = rng.uniform(0.8, 1.2, 200)
    offsets = rng.uniform(-0.25, 0.25, 200)
    points = symbol_I(xi, params) + offsets * np.array([_outward_normal(x, params) for x in xi])
    projection = gamma_membership_many(points, ArcRegion(0.5, 1.5, 0.2), params)
    equality = gamma_membership_many(points, ArcRegion(0.5, 1.5, 0.2, MembershipMode.DISTANCE_EQUALITY), params)
    np.testing.assert_array_equal(projection, equality)
    np.testing.assert_array_equal(projection, np.abs(offsets) < 0.2)


def test_weyl_count():
    assert weyl_count(ArcRegion.full_circle(0.1), 500) == pytest.approx(500)
    assert weyl_count(ArcRegion(0.0, math.pi, 0.1), 500) == pytest.approx(250)
    assert weyl_count(ArcRegion(1.0, 1.0, 0.1), 500) == 0
    left = weyl_count(ArcRegion(0.0, 1.0, 0.1), 300)
    right = weyl_count(ArcRegion(1.0, 2.5, 0.1), 300)
    assert left + right == pytest.approx(weyl_count(ArcRegion(0.0, 2.5, 0.1), 300))


def test_delta_phi_mass_equals_arc_length(params, rng):
    assert delta_phi_arc_identity(ArcRegion.full_circle(0.2), params) == pytest.approx(2 * math.pi, abs=1e-6)
    assert delta_phi_arc_identity(ArcRegion(0.0, math.pi, 0.2), params) == pytest.approx(math.pi, abs=1e-6)
    for _ in range(5):
        lo = rng.uniform(0, 2 * math.pi)
        length = rng.uniform(0.1, 2 * math.pi)
        region = ArcRegion(lo, lo + length, 0.2)
        assert delta_phi_arc_identity(region, params) == pytest.approx(length, abs=1e-6)
    with pytest.raises(ConfigError):
        delta_phi_arc_identity(ArcRegion.full_circle(0.2), params, mesh=8)


def test_counts_for_unperturbed_spectrum(params):
    spectrum = exact_spectrum_I(OperatorSpec(100, params))
    assert empirical_count(spectrum, ArcRegion.full_circle(0.3), params) == 0
    assert empirical_count([], ArcRegion.full_circle(0.3), params) == 0
    assert stray_count(spectrum, params, 0.3) == 100
    assert exterior_count(spectrum, params, 0.3) == 0
    assert exterior_count([5.0, 0.0], params, 0.3) == 1


def test_count_monotone_in_radius(params):
    config = PerturbationConfig.from_kappa(OperatorSpec(100, params), 3.0, trials=1)
    eigenvalues = run_trials(config)[0].eigenvalues
    counts = [empirical_count(eigenvalues, ArcRegion(0.0, math.pi, r), params) for r in (0.05, 0.1, 0.2, 0.3)]
    assert counts == sorted(counts)


def test_probability_floor():
    assert probability_floor(100, 0.3, None, 0.2) == 0.0
    assert probability_floor(100, 0.3, 3.0, 0.2) == 0.0
    floor = probability_floor(10**8, 0.3, 3.0, 0.5)
    assert 0.999 < floor <= 1.0


def test_gate_violations(params):
    spec = OperatorSpec(100, params)
    region = ArcRegion.full_circle(0.3)
    assert theorem_gate_violations(PerturbationConfig.from_kappa(spec, 3.0), region) == []
    low_kappa = theorem_gate_violations(PerturbationConfig.from_kappa(spec, 2.0), region)
    assert any("κ" in item for item in low_kappa)
    with pytest.raises(GateViolation) as info:
        eigenvalue_count_mc(PerturbationConfig(spec, delta=0.0), region)
    assert info.value.violations


def test_unperturbed_run_outside_theorem(params):
    config = PerturbationConfig(OperatorSpec(100, params), delta=0.0, trials=2)
    report = eigenvalue_count_mc(config, ArcRegion.full_circle(0.3), enforce_gates=False)
    assert not report.theorem_regime
    assert report.per_trial == (0, 0)
    assert report.theoretical == pytest.approx(100)
    assert report.pass_fraction == 0.0


def test_report_is_consistent(params):
    config = PerturbationConfig.from_kappa(OperatorSpec(100, params), 3.0, trials=4, master_seed=2)
    region = ArcRegion.full_circle(0.3)
    report = eigenvalue_count_mc(config, region)
    assert report.theorem_regime and report.trials == 4
    assert len(report.per_trial) == 4
    assert report.bound_rhs == pytest.approx(2 * 100**0.2 * (1 / 0.3 + math.log(100)))
    assert report.exterior_per_trial == tuple(100 - count for count in report.per_trial)
    assert report.mean == pytest.approx(np.mean(report.per_trial))
    precomputed = run_trials(config)
    again = eigenvalue_count_mc(config, region, results=precomputed)
    assert again.per_trial == report.per_trial
