import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.analysis import (
    AnalysisError,
    ComplexInputError,
    GridMismatchError,
    ResolutionError,
    decay_profile,
    dyadic_deltas,
    fejer_conjugate_sup,
    homeomorphism_modulus,
    log_modulus_statistic,
    modulus_of_continuity,
    partial_sum_sweep,
    sobolev_band_sums,
    sobolev_half,
    spectral_total_variation,
    stieltjes_pairing,
    total_variation,
)
from src.circle_core import CircleHomeomorphism, FourierSeries, GridFunction, analyze, compose
from src.conjugation import conjugate_grid, conjugate_spectral
from src.constants import TWO_PI
from src.functions import InvalidEpsilonRuleError
from src.theodorsen_solver import synthesize_ground_truth
from tests.conftest import COS, ORACLE, random_hermitian_series

INV_LOG = {"name": "inv_log", "offset": 2}


def test_total_variation_examples():
    assert total_variation(GridFunction(n=64, values=np.full(64, 3.0))) == 0.0
    assert total_variation(GridFunction.from_function(np.sin, 4096)) == pytest.approx(4.0, abs=1e-5)


def test_total_variation_properties(rng):
    a = GridFunction(n=128, values=rng.normal(size=128))
    b = GridFunction(n=128, values=rng.normal(size=128))
    both = GridFunction(n=128, values=a.values + b.values)
    assert total_variation(both) <= total_variation(a) + total_variation(b) + 1e-12
    shifted = GridFunction(n=128, values=a.values + 5.0)
    assert total_variation(shifted) == pytest.approx(total_variation(a), abs=1e-12)


def test_total_variation_rejects_complex():
    with pytest.raises(ComplexInputError):
        total_variation(GridFunction.from_function(lambda t: np.exp(1j * t), 16))


def test_spectral_total_variation_recovers_peaks_between_nodes():
    g = GridFunction.from_function(lambda t: np.sin(t + 0.3), 16)
    spectral = spectral_total_variation(g)
    assert abs(spectral - 4.0) < 2e-3
    assert abs(spectral - 4.0) < abs(total_variation(g) - 4.0)
    with pytest.raises(ComplexInputError):
        spectral_total_variation(GridFunction.from_function(lambda t: np.exp(1j * t), 16))


def test_spectral_total_variation_of_solver_output_is_stable(cos_outcomes_by_grid):
    tv = {n: spectral_total_variation(outcome.h.displacement()) for n, outcome in cos_outcomes_by_grid.items()}
    assert tv[2048] <= 4 * np.pi
    assert abs(tv[2048] - tv[1024]) < 1e-5


def test_total_variation_of_oracle_is_stable_under_refinement():
    _, coarse = synthesize_ground_truth(0.3, 1024)
    _, fine = synthesize_ground_truth(0.3, 2048)
    tv_coarse = total_variation(coarse.displacement())
    tv_fine = total_variation(fine.displacement())
    assert tv_fine <= 4 * np.pi
    assert abs(tv_fine - tv_coarse) < 1e-5


def test_modulus_of_continuity_examples():
    n = 256
    spacing = TWO_PI / n
    assert modulus_of_continuity(GridFunction(n=n, values=np.ones(n)), [spacing, 1.0]) == [0.0, 0.0]
    assert modulus_of_continuity(GridFunction.from_function(np.cos, n), [np.pi])[0] == pytest.approx(2.0)


def test_modulus_of_continuity_is_monotone_and_bounded(rng):
    g = GridFunction(n=128, values=rng.normal(size=128))
    deltas = np.linspace(TWO_PI / 128, np.pi, 40)
    omegas = modulus_of_continuity(g, deltas)
    assert all(later >= earlier for earlier, later in zip(omegas, omegas[1:]))
    assert max(omegas) <= np.max(g.values) - np.min(g.values)


def test_modulus_below_resolution():
    with pytest.raises(ResolutionError):
        modulus_of_continuity(GridFunction(n=64, values=np.zeros(64)), [0.5 * TWO_PI / 64])


def test_homeomorphism_modulus_of_identity():
    deltas = dyadic_deltas(512)
    assert_allclose(homeomorphism_modulus(CircleHomeomorphism.identity(512), deltas), deltas, rtol=1e-12)


def test_homeomorphism_modulus_crosses_the_seam():
    # Steepest next to t = 0, so the largest step straddles the seam
    h = CircleHomeomorphism.from_function(lambda t: t + 0.9 * np.sin(t), 256)
    omega = homeomorphism_modulus(h, [TWO_PI / 256])[0]
    steps = np.diff(h.lift)
    assert omega == pytest.approx(np.max(steps))


def test_dyadic_deltas():
    deltas = dyadic_deltas(2048)
    assert deltas[0] == TWO_PI / 2048
    assert max(deltas) <= 0.25
    assert len(deltas) == 7
    assert all(later == 2 * earlier for earlier, later in zip(deltas, deltas[1:]))


def test_log_modulus_statistic():
    assert log_modulus_statistic([0.1, 0.2], [0.5, 0.5]) == pytest.approx(0.5 * np.log(10.0))
    with pytest.raises(AnalysisError):
        log_modulus_statistic([0.1], [])


def test_log_modulus_statistic_is_bounded_across_grids():
    statistics = []
    for n in (512, 1024, 2048):
        _, h = synthesize_ground_truth(0.3, n)
        deltas = dyadic_deltas(n)
        statistics.append(log_modulus_statistic(deltas, homeomorphism_modulus(h, deltas)))
    for earlier, later in zip(statistics, statistics[1:]):
        assert 0.8 <= later / earlier <= 1.25


def test_log_modulus_statistic_of_solver_output_across_grids(cos_outcomes_by_grid):
    statistics = []
    for n in (512, 1024, 2048):
        outcome = cos_outcomes_by_grid[n]
        assert outcome.converged
        deltas = dyadic_deltas(n)
        statistics.append(log_modulus_statistic(deltas, homeomorphism_modulus(outcome.h, deltas)))
    for earlier, later in zip(statistics, statistics[1:]):
        assert 0.8 <= later / earlier <= 1.25


def test_sobolev_half_examples():
    assert sobolev_half(FourierSeries.from_mapping({0: 2.0}, real_flag=True)) == 0.0
    assert sobolev_half(analyze(GridFunction.from_function(np.cos, 16))) == pytest.approx(0.5)
    assert sobolev_half(analyze(GridFunction.from_function(lambda t: np.sin(2 * t), 16))) == pytest.approx(1.0)


def test_sobolev_half_is_conjugation_invariant(rng):
    s = random_hermitian_series(rng, 63)
    assert sobolev_half(conjugate_spectral(s)) == pytest.approx(sobolev_half(s), rel=1e-14)


def test_sobolev_band_sums_accumulate():
    s = analyze(GridFunction.from_function(lambda t: np.cos(t) + np.sin(3 * t) + np.cos(9 * t), 64))
    sums = sobolev_band_sums(s)
    assert len(sums) == 5
    assert_allclose(sums, [0.5, 0.5 + 1.5, 2.0, 2.0 + 4.5, 6.5], atol=1e-12)
    assert sums[-1] == pytest.approx(sobolev_half(s))


def test_decay_profile_examples():
    profile = decay_profile(analyze(GridFunction.from_function(np.cos, 16)))
    assert profile.max_freq == 7
    assert_allclose(profile.band_maxima, [0.5, 0.0, 0.0], atol=1e-15)
    assert profile.global_sup == pytest.approx(0.5)

    zero = decay_profile(FourierSeries.zeros(max_freq=7))
    assert zero.band_maxima == [0.0, 0.0, 0.0]
    assert zero.global_sup == 0.0


def test_decay_profile_respects_cutoff():
    profile = decay_profile(analyze(GridFunction.from_function(lambda t: np.cos(12 * t), 64)), max_freq=8)
    assert profile.max_freq == 8
    assert profile.global_sup == pytest.approx(0.0, abs=1e-14)


def test_decay_of_composition_is_stable_across_grids(cos_outcomes_by_grid):
    sups = []
    for n in (512, 1024, 2048):
        composed = compose(COS, cos_outcomes_by_grid[n].h)
        sups.append(decay_profile(analyze(composed), max_freq=n // 4).global_sup)
    assert sups[0] > 0.0
    for earlier, later in zip(sups, sups[1:]):
        assert 0.8 <= later / earlier <= 1.25


@pytest.mark.parametrize(
    "g, gt, expected",
    [
        (np.cos, np.sin, 0.5),
        (lambda t: np.sin(2 * t), lambda t: -np.cos(2 * t), 1.0),
    ],
)
def test_stieltjes_pairing_closed_forms(g, gt, expected):
    pairing = stieltjes_pairing(GridFunction.from_function(g, 4096), GridFunction.from_function(gt, 4096))
    assert abs(pairing - expected) < 1e-6


def test_stieltjes_pairing_matches_sobolev_for_degree_32(rng):
    for _ in range(5):
        s = random_hermitian_series(rng, 32)
        g = GridFunction.from_function(lambda t: np.real(np.exp(1j * np.multiply.outer(t, s.frequencies)) @ s.coeffs), 4096)
        pairing = stieltjes_pairing(g, conjugate_grid(g))
        assert pairing >= 0.0
        assert abs(pairing - sobolev_half(analyze(g))) < 1e-6


def test_stieltjes_pairing_on_a_coarse_grid(rng):
    s = random_hermitian_series(rng, 16)
    g = GridFunction.from_function(lambda t: np.real(np.exp(1j * np.multiply.outer(t, s.frequencies)) @ s.coeffs), 1024)
    assert abs(stieltjes_pairing(g, conjugate_grid(g)) - sobolev_half(analyze(g))) < 1e-6 * sobolev_half(analyze(g))


def test_stieltjes_pairing_for_solver_output(cos_outcome):
    composed = compose(COS, cos_outcome.h)
    pairing = stieltjes_pairing(composed, conjugate_grid(composed))
    assert abs(pairing - sobolev_half(analyze(composed))) < 1e-4


def test_stieltjes_pairing_input_errors():
    with pytest.raises(GridMismatchError):
        stieltjes_pairing(GridFunction(n=16, values=np.zeros(16)), GridFunction(n=32, values=np.zeros(32)))
    with pytest.raises(ComplexInputError):
        complex_samples = GridFunction.from_function(lambda t: np.exp(1j * t), 16)
        stieltjes_pairing(complex_samples, complex_samples)


def test_fejer_conjugate_sup_smallest_case():
    computed, closed = fejer_conjugate_sup(INV_LOG, 2)
    assert closed == pytest.approx(0.5 / np.log(3.0), abs=1e-15)
    assert closed == pytest.approx(0.455119, abs=1e-6)
    assert abs(computed - closed) < 1e-10


def test_fejer_conjugate_sup_grows_and_matches():
    closed_forms = []
    for N in (16, 64, 256):
        computed, closed = fejer_conjugate_sup(INV_LOG, N, n=4096)
        assert abs(computed - closed) < 1e-10
        closed_forms.append(closed)
    assert closed_forms[0] < closed_forms[1] < closed_forms[2]


def test_fejer_conjugate_sup_closed_form_increasing_to_1024():
    closed = [fejer_conjugate_sup(INV_LOG, N)[1] for N in (16, 64, 256, 1024)]
    assert all(later > earlier for earlier, later in zip(closed, closed[1:]))


def test_fejer_conjugate_sup_errors():
    with pytest.raises(AnalysisError):
        fejer_conjugate_sup(INV_LOG, 1)
    with pytest.raises(ResolutionError):
        fejer_conjugate_sup(INV_LOG, 64, n=64)
    with pytest.raises(InvalidEpsilonRuleError):
        fejer_conjugate_sup({"name": "constant", "value": 0.0}, 4)


def test_partial_sum_sweep_on_solver_output(cos_outcome):
    sweep = partial_sum_sweep(compose(COS, cos_outcome.h))
    assert sweep.orders == [8, 16, 32, 64, 128, 256, 512]
    assert sweep.nonincreasing
    assert sweep.sup_errors[-1] < 1e-12


def test_partial_sum_sweep_of_oracle_decreases():
    spec, h = synthesize_ground_truth(0.3, 512)
    sweep = partial_sum_sweep(compose(spec, h), orders=[2, 4, 8, 16])
    assert sweep.nonincreasing
    assert spec == ORACLE
