from __future__ import annotations

import numpy as np
import pytest

from toeplitz_spectra.errors import ConfigError, NumericalError, RegimeError
from toeplitz_spectra.numerics import (
    RngStream,
    complex_gaussian_sample,
    eig,
    hermitian_extreme_eigpair,
    hs_norm,
    log_abs_det,
    log_det,
    operator_norm,
    pairing_distance,
    smallest_singular_value,
    solve,
    trace_norm,
)
from toeplitz_spectra.symbol import Case, SymbolParams, dist_to_focal_segment
from toeplitz_spectra.toeplitz import OperatorSpec, build_P, exact_spectrum_I


def test_complex_gaussian_moments():
    samples = RngStream(11, 0).complex_gaussian(10**6)
    assert abs(samples.mean()) < 0.005
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(1.0, abs=0.01)
    assert np.var(samples.real) == pytest.approx(0.5, abs=0.01)


def test_streams_are_deterministic_and_independent():
    first = RngStream(5, 3).complex_gaussian(64)
    again = RngStream(5, 3).complex_gaussian(64)
    other = RngStream(5, 4).complex_gaussian(64)
    np.testing.assert_array_equal(first, again)
    assert not np.allclose(first, other)
    assert isinstance(complex_gaussian_sample(RngStream(5, 3)), complex)


def test_negative_seed_rejected():
    with pytest.raises(ConfigError):
        RngStream(-1, 0)


def test_eig_two_by_two():
    a, b = 1 + 1j, 0.5
    values = eig(np.array([[0, a], [b, 0]]))
    root = np.sqrt(a * b)
    assert pairing_distance(values, [root, -root]) < 1e-12


def test_eig_identity_and_verify():
    values = eig(np.eye(3), verify=True)
    np.testing.assert_allclose(values, np.ones(3), atol=1e-14)


def test_eig_nilpotent_case_II():
    spec = OperatorSpec(50, SymbolParams(1j, 0.5, Case.II))
    assert np.max(np.abs(eig(build_P(spec)))) <= 1e-4


def test_eig_rejects_bad_input():
    with pytest.raises(ConfigError):
        eig(np.ones((2, 3)))
    with pytest.raises(ConfigError):
        eig(np.array([[np.nan]]))
    with pytest.raises(ConfigError):
        eig(np.eye(2), balance="lapack")


def test_balanced_eig_matches_closed_form_at_n200(params):
    spec = OperatorSpec(200, params)
    values = eig(build_P(spec))
    assert pairing_distance(values, exact_spectrum_I(spec)) <= 1e-6 * params.abs_a


def test_unbalanced_eig_leaves_focal_segment(params):
    spec = OperatorSpec(400, params)
    values = eig(build_P(spec), balance="none")
    assert np.max(dist_to_focal_segment(values, params)) > 1e-3


def test_log_abs_det_examples():
    assert log_abs_det(np.eye(7)) == 0.0
    assert log_abs_det(np.diag([2.0, 3j])) == pytest.approx(np.log(6.0), rel=1e-14)
    assert log_abs_det(np.zeros((3, 3))) == float("-inf")


def test_log_det_phase_matches_numpy(rng):
    matrix = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    phase, log_abs = log_det(matrix)
    assert phase * np.exp(log_abs) == pytest.approx(np.linalg.det(matrix), rel=1e-10)


def test_solve_identity_and_triangular(rng):
    rhs = rng.standard_normal((4, 2)) + 0j
    np.testing.assert_allclose(solve(np.eye(4), rhs), rhs)
    lower = np.tril(rng.standard_normal((5, 5))) + 3 * np.eye(5)
    x = solve(lower, np.eye(5))
    assert np.max(np.abs(np.triu(x, 1))) <= 1e-12
    assert np.linalg.norm(lower @ x - np.eye(5)) <= 1e-10 * np.linalg.norm(lower) * np.linalg.norm(x)


def test_solve_singular_raises():
    with pytest.raises(NumericalError):
        solve(np.array([[1.0, 2.0], [2.0, 4.0]]), np.eye(2))


def test_hermitian_extreme_eigpair(rng):
    raw = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    hermitian = raw + raw.conj().T
    value, vector = hermitian_extreme_eigpair(hermitian)
    assert value == pytest.approx(np.max(np.linalg.eigvalsh(hermitian)), rel=1e-12)
    assert np.linalg.norm(vector) == pytest.approx(1.0)
    assert np.linalg.norm(hermitian @ vector - value * vector) <= 1e-8 * np.linalg.norm(hermitian)
    with pytest.raises(RegimeError):
        hermitian_extreme_eigpair(raw)


def test_norms_and_pairing(rng):
    matrix = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    singular = np.linalg.svd(matrix, compute_uv=False)
    assert hs_norm(matrix) == pytest.approx(np.sqrt(np.sum(singular**2)))
    assert operator_norm(matrix) == pytest.approx(singular[0])
    assert trace_norm(matrix) == pytest.approx(np.sum(singular))
    assert smallest_singular_value(matrix) == pytest.approx(singular[-1])
    assert pairing_distance([0, 1j], [1j + 0.1, 0]) == pytest.approx(0.1)
    with pytest.raises(ConfigError):
        pairing_distance([0], [0, 1])
