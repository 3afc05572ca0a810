from __future__ import annotations

import math

import numpy as np
import pytest

from toeplitz_spectra.errors import ConfigError, RegimeError
from toeplitz_spectra.symbol import (
    Case,
    Case2Regime,
    RegionI,
    RegionII,
    SymbolParams,
    case2_curve_decomposition,
    case2_regime,
    char_roots_I,
    char_roots_II,
    classify_I,
    classify_II,
    confocal_radii,
    dist_to_arc,
    dist_to_E1,
    dist_to_focal_segment,
    ellipse_family,
    ellipse_point,
    outside_E1,
    root_counts,
    symbol_I,
    symbol_II,
)


def test_params_validation():
    with pytest.raises(ConfigError):
        SymbolParams(0, 1)
    with pytest.raises(ConfigError):
        SymbolParams(1, complex("nan"))
    with pytest.raises(ConfigError):
        SymbolParams(1, 1, "III")


def test_char_roots_I_solve_quadratic(params, rng):
    for z in rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20):
        roots = char_roots_I(z, params)
        for zeta in roots:
            assert abs(params.a * zeta**2 - z * zeta + params.b) <= 1e-12 * (1 + abs(z))
        assert abs(roots.zeta_plus) <= abs(roots.zeta_minus)
        assert abs(roots.zeta_plus * roots.zeta_minus - params.b / params.a) <= 1e-12


def test_char_roots_II_solve_quadratic(rng):
    p = SymbolParams(0.4j, 0.5, Case.II)
    for z in rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20):
        for zeta in char_roots_II(z, p):
            assert abs(p.b * zeta**2 + p.a * zeta - z) <= 1e-12 * (1 + abs(z))


def _disc_samples(rng, radius: float, count: int) -> np.ndarray:
    return radius * np.sqrt(rng.uniform(0, 1, count)) * np.exp(2j * np.pi * rng.uniform(0, 1, count))


def test_vieta_relations(params, rng):
    ratio = params.b / params.a
    for z in _disc_samples(rng, 3 * (params.abs_a + params.abs_b), 10_000):
        roots = char_roots_I(complex(z), params)
        assert abs(roots.zeta_plus * roots.zeta_minus - ratio) <= 1e-10 * abs(ratio)
        assert abs(params.a * (roots.zeta_plus + roots.zeta_minus) - z) <= 1e-10 * (1 + abs(z))


def test_double_root_at_focal_point(params):
    assert char_roots_I(params.focal_point, params).is_double
    assert not char_roots_I(0.3 + 0.1j, params).is_double


def test_classify_I(params):
    assert classify_I(symbol_I(0.3, params), params) is RegionI.ON_CURVE
    assert classify_I(0.3j, params) is RegionI.INTERIOR
    assert classify_I(5.0, params) is RegionI.EXTERIOR
    assert classify_I(0.0, params) is RegionI.INTERIOR
    assert classify_I(0.0, params, refine_focal=True) is RegionI.FOCAL_SEGMENT


def test_classify_I_rejects_other_regimes():
    with pytest.raises(RegimeError):
        classify_I(0.0, SymbolParams(0.5, 1.0))
    with pytest.raises(RegimeError):
        classify_I(0.0, SymbolParams(1.0, 0.5, Case.II))


def test_case2_regimes():
    assert case2_regime(SymbolParams(2.0, 0.5, Case.II)) is Case2Regime.SIMPLE
    assert case2_regime(SymbolParams(1j, 0.5, Case.II)) is Case2Regime.CUSP
    assert case2_regime(SymbolParams(0.4j, 0.5, Case.II)) is Case2Regime.SELF_INTERSECTING


def test_classify_II():
    simple = SymbolParams(2.0, 0.5, Case.II)
    assert classify_II(0.0, simple) is RegionII.SIMPLE_INTERIOR
    assert classify_II(symbol_II(0.4, simple), simple) is RegionII.SIMPLE_ON_CURVE
    crossing = SymbolParams(0.4j, 0.5, Case.II)
    assert classify_II(0.0, crossing) is RegionII.INT_INT
    assert classify_II(100.0, crossing) is RegionII.EXTERIOR
    decomposition = case2_curve_decomposition(crossing)
    assert classify_II(decomposition.self_intersection, crossing) is RegionII.SELF_INTERSECTION


TAG_ROOT_COUNTS = {
    RegionII.INT_INT: (2, 0, 0),
    RegionII.ON_GAMMA_INT: (1, 1, 0),
    RegionII.SELF_INTERSECTION: (0, 2, 0),
    RegionII.ANNULUS: (1, 0, 1),
    RegionII.ON_GAMMA_EXT: (0, 1, 1),
    RegionII.EXTERIOR: (0, 0, 2),
    RegionII.CUSP: (0, 2, 0),
    RegionII.SIMPLE_INTERIOR: (1, 0, 1),
    RegionII.SIMPLE_ON_CURVE: (0, 1, 1),
}


@pytest.mark.parametrize(
    "a, expected",
    [
        (2.0, {RegionII.SIMPLE_INTERIOR, RegionII.EXTERIOR}),
        (1j, {RegionII.SIMPLE_INTERIOR, RegionII.EXTERIOR}),
        (0.4j, {RegionII.INT_INT, RegionII.ANNULUS, RegionII.EXTERIOR}),
    ],
)
def test_classify_II_root_counts_by_regime(a, expected, rng):
    p = SymbolParams(a, 0.5, Case.II)
    seen = set()
    for z in _disc_samples(rng, 1.5 * (p.abs_a + p.abs_b), 10_000):
        tag = classify_II(complex(z), p)
        assert root_counts(char_roots_II(complex(z), p)) == TAG_ROOT_COUNTS[tag]
        seen.add(tag)
    assert seen == expected


def test_self_intersection_is_a_double_point():
    p = SymbolParams(0.4j, 0.5, Case.II)
    curve = case2_curve_decomposition(p)

    def normalized(zeta):
        return p.abs_a * zeta + p.abs_b * zeta * zeta

    assert abs(normalized(curve.alpha_c) - normalized(curve.alpha_c.conjugate())) <= 1e-12
    assert root_counts(char_roots_II(curve.self_intersection, p)) == (0, 2, 0)


def test_case2_decomposition_self_intersecting():
    p = SymbolParams(0.4j, 0.5, Case.II)
    curve = case2_curve_decomposition(p, samples=256)
    assert curve.regime is Case2Regime.SELF_INTERSECTING
    assert curve.zeta_c == pytest.approx(-0.4)
    assert abs(curve.alpha_c) == pytest.approx(1.0)
    assert curve.gamma_int[0] == pytest.approx(curve.self_intersection)
    assert curve.gamma_ext[-1] == pytest.approx(curve.self_intersection)
    assert curve.curve.shape == (256,)
    assert curve.cusp is None


def test_case2_decomposition_cusp_and_simple():
    cusp = case2_curve_decomposition(SymbolParams(1j, 0.5, Case.II))
    assert cusp.cusp == pytest.approx(SymbolParams(1j, 0.5).critical_value, abs=1e-12)
    assert cusp.self_intersection is None
    simple = case2_curve_decomposition(SymbolParams(2.0, 0.5, Case.II))
    assert simple.self_intersection is None and simple.cusp is None
    assert simple.gamma_int.size == 0 and simple.gamma_ext.size == 0


def test_ellipse_points_have_constant_focal_sum(params):
    c = params.focal_point
    points = ellipse_point(np.linspace(0, 2 * np.pi, 50), params)
    sums = np.abs(points - c) + np.abs(points + c)
    np.testing.assert_allclose(sums, 2 * (params.abs_a + params.abs_b), rtol=1e-12)


def test_family_points_have_prescribed_root_modulus(params):
    family = ellipse_family(params)
    for rho in (0.7, 1.0, 1.4):
        z = family.point(0.9, rho)
        assert abs(char_roots_I(z, params).zeta_minus) == pytest.approx(rho, rel=1e-12)
        assert confocal_radii(z, params).rho_minus == pytest.approx(rho, rel=1e-10)
    radii = confocal_radii(ellipse_point(0.2, params), params)
    assert radii.rho_plus == pytest.approx(params.r_min**2, rel=1e-10)


def test_dist_to_E1(params):
    distance, xi = dist_to_E1(symbol_I(1.0, params), params)
    assert distance < 1e-10
    assert xi == pytest.approx(1.0, abs=1e-6)
    distance, _ = dist_to_E1(0.0, params)
    assert distance == pytest.approx(params.abs_a - params.abs_b, abs=1e-9)


def test_dist_to_E1_centre_of_real_ellipse():
    distance, xi = dist_to_E1(0.0, SymbolParams(2.0, 1.0))
    assert distance == pytest.approx(1.0, abs=1e-10)
    assert min(abs(xi - 0.5 * np.pi), abs(xi - 1.5 * np.pi)) <= 1e-6


def test_confocal_nesting(params):
    family = ellipse_family(params)
    r_min = family.r_min
    assert family.g(r_min) == pytest.approx(2 * math.sqrt(params.abs_a * params.abs_b), rel=1e-12)
    assert family.g(r_min) == pytest.approx(abs(params.focal_point), rel=1e-12)
    assert np.all(np.diff(family.g(np.linspace(0.05 * r_min, r_min, 200))) < 0)
    assert np.all(np.diff(family.g(np.linspace(r_min, 3.0, 200))) > 0)


def test_dist_to_E1_matches_dense_sampling(params):
    z = ellipse_family(params).point(0.3, 1.5)
    dense = symbol_I(np.linspace(0, 2 * np.pi, 200_001), params)
    distance, _ = dist_to_E1(z, params)
    assert distance == pytest.approx(float(np.min(np.abs(dense - z))), abs=1e-8)


def test_dist_to_arc(params):
    z = symbol_I(1.0, params)
    assert dist_to_arc(z, 0.5, 1.5, params) < 1e-10
    assert dist_to_arc(z, 2.0, 3.0, params) > 0.1


def test_dist_to_focal_segment_and_outside(params):
    c = params.focal_point
    assert dist_to_focal_segment(c, params) == pytest.approx(0.0, abs=1e-15)
    assert dist_to_focal_segment(0.0, params) == 0.0
    assert dist_to_focal_segment(2 * c, params) == pytest.approx(abs(c))
    mask = outside_E1([0.0, 5.0, 5j], params)
    assert mask.tolist() == [False, True, True]
