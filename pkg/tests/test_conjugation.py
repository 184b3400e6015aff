import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.circle_core import FourierSeries, GridFunction, analyze, synthesize
from src.conjugation import (
    ConjugationError,
    QuadratureResolutionError,
    conjugate_grid,
    conjugate_quadrature,
    conjugate_spectral,
    fejer_sum,
    partial_sum,
)
from src.constants import TWO_PI
from src.helpers import grid_nodes
from tests.conftest import random_hermitian_series


def quadrature_test_poly(t):
    return np.cos(t) + 0.5 * np.sin(2 * t) + 0.2 * np.cos(5 * t) + 0.1 * np.sin(8 * t)


def quadrature_test_poly_conjugate(t):
    return np.sin(t) - 0.5 * np.cos(2 * t) + 0.2 * np.sin(5 * t) - 0.1 * np.cos(8 * t)


def quadrature_gap(n):
    g = GridFunction.from_function(quadrature_test_poly, n)
    return np.max(np.abs(conjugate_quadrature(g).values - conjugate_grid(g).values))


def test_cosine_maps_to_sine():
    s = conjugate_spectral(analyze(GridFunction.from_function(np.cos, 16)))
    assert s.coefficient(1) == pytest.approx(-0.5j, abs=1e-15)
    assert s.coefficient(-1) == pytest.approx(0.5j, abs=1e-15)
    assert s.real_flag


def test_constant_maps_to_zero():
    s = conjugate_spectral(FourierSeries.from_mapping({0: 3.0}, max_freq=4, real_flag=True))
    assert np.all(s.coeffs == 0)


@pytest.mark.parametrize("k", range(1, 33))
def test_multiplier_on_cos_and_sin(k):
    cos_k = FourierSeries.from_mapping({k: 0.5, -k: 0.5}, real_flag=True)
    sin_k = FourierSeries.from_mapping({k: -0.5j, -k: 0.5j}, real_flag=True)
    minus_cos_k = FourierSeries.from_mapping({k: -0.5, -k: -0.5}, real_flag=True)
    assert np.max(np.abs(conjugate_spectral(cos_k).coeffs - sin_k.coeffs)) < 1e-14
    assert np.max(np.abs(conjugate_spectral(sin_k).coeffs - minus_cos_k.coeffs)) < 1e-14


def test_lacunary_sine_series_conjugates_to_minus_cosines():
    weights = 1.0 / np.log(np.arange(1, 9) + 2.0) / np.arange(1, 9)
    t = grid_nodes(64)
    g = GridFunction(n=64, values=sum(w * np.sin(k * t) for k, w in enumerate(weights, start=1)))
    expected = -sum(w * np.cos(k * t) for k, w in enumerate(weights, start=1))
    assert_allclose(conjugate_grid(g).values, expected, atol=1e-13)


def test_operator_algebra_on_random_series(rng):
    for _ in range(100):
        s = random_hermitian_series(rng, 63)
        mean_removed = s.coeffs.copy()
        mean_removed[s.max_freq] = 0.0

        twice = conjugate_spectral(conjugate_spectral(s))
        assert np.max(np.abs(twice.coeffs + mean_removed)) < 1e-14

        once = conjugate_spectral(s)
        assert abs(np.sum(np.abs(once.coeffs) ** 2) - np.sum(np.abs(mean_removed) ** 2)) < 1e-14 * np.sum(np.abs(mean_removed) ** 2)

        shift = rng.uniform(0.0, TWO_PI)
        rotated_first = conjugate_spectral(s.rotated(shift))
        conjugated_first = once.rotated(shift)
        assert np.max(np.abs(rotated_first.coeffs - conjugated_first.coeffs)) < 1e-14


def test_real_input_gives_real_conjugate(rng):
    g = GridFunction(n=128, values=rng.normal(size=128))
    conjugate = conjugate_grid(g)
    assert conjugate.is_real
    s = analyze(conjugate)
    assert np.max(np.abs(s.coeffs - np.conj(s.coeffs[::-1]))) < 1e-12


def test_quadrature_of_zero():
    assert np.all(conjugate_quadrature(GridFunction(n=64, values=np.zeros(64))).values == 0)


def test_quadrature_of_cosine():
    g = GridFunction.from_function(np.cos, 1024)
    assert np.max(np.abs(conjugate_quadrature(g, TWO_PI / 1024).values - np.sin(g.nodes))) < 1e-2


def test_quadrature_agrees_with_spectral_and_converges_first_order():
    coarse = quadrature_gap(4096)
    fine = quadrature_gap(8192)
    assert coarse < 5e-3
    assert 2.0 * 0.75 <= coarse / fine <= 2.0 * 1.25


def test_spectral_conjugate_of_quadrature_poly():
    g = GridFunction.from_function(quadrature_test_poly, 64)
    assert_allclose(conjugate_grid(g).values, quadrature_test_poly_conjugate(g.nodes), atol=1e-14)


def test_quadrature_rejects_subgrid_radius():
    g = GridFunction(n=64, values=np.zeros(64))
    with pytest.raises(QuadratureResolutionError):
        conjugate_quadrature(g, 0.5 * TWO_PI / 64)
    with pytest.raises(QuadratureResolutionError):
        conjugate_quadrature(g, 4.0)


def test_fejer_weights():
    s = analyze(GridFunction.from_function(lambda t: np.cos(t) + np.sin(3 * t) + 2.0, 16))
    only_mean = fejer_sum(s, 1)
    assert only_mean.coefficient(0) == pytest.approx(2.0)
    assert np.max(np.abs(np.delete(only_mean.coeffs, only_mean.max_freq))) == 0.0

    half = fejer_sum(analyze(GridFunction.from_function(np.cos, 16)), 2)
    assert half.coefficient(1) == pytest.approx(0.25, abs=1e-15)


def test_fejer_sums_converge_uniformly():
    t = grid_nodes(64)
    values = sum(np.cos(k * t) / k + np.sin(k * t) / k ** 2 for k in range(1, 11))
    g = GridFunction(n=64, values=values)
    s = analyze(g)
    errors = [np.max(np.abs(synthesize(fejer_sum(s, N), 64).values - values)) for N in (100, 200, 400, 800)]
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < 0.1


def test_fejer_order_must_be_positive():
    with pytest.raises(ConjugationError):
        fejer_sum(FourierSeries.zeros(2), 0)


def test_partial_sum_truncation():
    s = analyze(GridFunction.from_function(lambda t: 1.0 + np.cos(t) + np.cos(5 * t), 32))
    assert partial_sum(s, s.max_freq + 4).coeffs.tolist() == s.coeffs.tolist()
    zeroth = partial_sum(s, 0)
    assert zeroth.max_freq == 0
    assert zeroth.coefficient(0) == pytest.approx(1.0)
