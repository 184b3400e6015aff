"""
Grid diagnostics for the conclusions about f o h and its conjugate: variation, modulus of
continuity, coefficient decay, the W^{1/2} seminorm and its Stieltjes-integral form, partial
sums, and the Fejer-sum counterexample.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.circle_core import CircleHomeomorphism, FourierSeries, GridFunction, analyze, synthesize
from src.conjugation import conjugate_spectral, fejer_sum, partial_sum
from src.constants import DEFAULT_OPTIONS, TWO_PI
from src.functions import epsilon_values, parse_epsilon_rule
from src.helpers import next_power_of_two
from src.types import DecayProfile, PartialSumSweep

logger = logging.getLogger("analysis")

MONOTONE_SLACK = 1e-12


class AnalysisError(Exception):
    """Base exception for diagnostic errors"""
    pass


class ResolutionError(AnalysisError):
    """Raised when a requested scale is finer than the grid"""
    pass


class GridMismatchError(AnalysisError):
    """Raised when paired samples live on different grids"""
    pass


class ComplexInputError(AnalysisError):
    """Raised when a real-valued diagnostic receives complex samples"""
    pass


def _require_real(g: GridFunction, what: str) -> np.ndarray:
    if not g.is_real:
        raise ComplexInputError(f"{what} requires real samples")
    return g.values


def total_variation(g: GridFunction) -> float:
    """Cyclic grid variation sum_j |g(t_{j+1}) - g(t_j)|"""
    values = _require_real(g, "total_variation")
    return float(np.sum(np.abs(np.roll(values, -1) - values)))


def spectral_total_variation(g: GridFunction, oversample: int = DEFAULT_OPTIONS["TV_OVERSAMPLE"]) -> float:
    """Variation of the trigonometric interpolant of g, sampled on a grid oversample times finer.

    The plain grid sum misses O(spacing^2) near each extremum; for spectrally resolved g the
    oversampled sum shrinks that by oversample^2.
    """
    _require_real(g, "spectral_total_variation")
    return total_variation(synthesize(analyze(g), oversample * g.n))


def _lags_for(deltas: Sequence[float], n: int) -> np.ndarray:
    spacing = TWO_PI / n
    deltas = np.asarray(deltas, dtype=float)
    if np.any(deltas < spacing * (1.0 - 1e-9)):
        raise ResolutionError(f"deltas must be >= grid spacing {spacing:.3e}")
    # Cyclic distances never exceed pi, so lags beyond n/2 repeat earlier ones
    return np.minimum(np.floor(deltas / spacing + 1e-9).astype(int), n // 2)


def _cumulative_lag_maxima(extended: np.ndarray, n: int, max_lag: int) -> np.ndarray:
    """maxima[m] = max over lags 1..m of max_j |extended[j + lag] - extended[j]|"""
    maxima = np.zeros(max_lag + 1)
    for lag in range(1, max_lag + 1):
        maxima[lag] = max(maxima[lag - 1], float(np.max(np.abs(extended[lag:lag + n] - extended[:n]))))
    return maxima


def modulus_of_continuity(g: GridFunction, deltas: Sequence[float]) -> List[float]:
    """omega(delta) = max |g(t_i) - g(t_j)| over grid pairs at cyclic distance <= delta"""
    values = _require_real(g, "modulus_of_continuity")
    lags = _lags_for(deltas, g.n)
    if lags.size == 0:
        return []
    extended = np.concatenate([values, values])
    maxima = _cumulative_lag_maxima(extended, g.n, int(np.max(lags)))
    return [float(maxima[lag]) for lag in lags]


def homeomorphism_modulus(h: CircleHomeomorphism, deltas: Sequence[float]) -> List[float]:
    """Modulus of continuity of the lift h, using h(t + 2*pi) = h(t) + 2*pi across the seam"""
    lags = _lags_for(deltas, h.n)
    if lags.size == 0:
        return []
    extended = np.concatenate([h.values, h.values + TWO_PI])
    maxima = _cumulative_lag_maxima(extended, h.n, int(np.max(lags)))
    return [float(maxima[lag]) for lag in lags]


def dyadic_deltas(n: int, max_delta: float = DEFAULT_OPTIONS["LOG_MODULUS_MAX_DELTA"]) -> List[float]:
    """delta_j = 2*pi*2^-j lying in [2*pi/n, max_delta], ascending"""
    top = int(np.log2(n))
    return [TWO_PI / 2 ** j for j in range(top, 0, -1) if TWO_PI / 2 ** j <= max_delta]


def log_modulus_statistic(deltas: Sequence[float], omegas: Sequence[float]) -> float:
    """sup_delta omega(delta) log(1/delta), bounded when omega = O(1/log(1/delta))"""
    if len(deltas) != len(omegas):
        raise AnalysisError("deltas and omegas differ in length")
    if len(deltas) == 0:
        return 0.0
    deltas = np.asarray(deltas, dtype=float)
    return float(np.max(np.asarray(omegas, dtype=float) * np.log(1.0 / deltas)))


def sobolev_half(s: FourierSeries) -> float:
    """sum_{|k| <= M} |c_k|^2 |k|"""
    return float(np.sum(np.abs(s.coeffs) ** 2 * np.abs(s.frequencies)))


def sobolev_band_sums(s: FourierSeries) -> List[float]:
    """Cumulative W^{1/2} sums after each dyadic band 2^m <= |k| < 2^(m+1)"""
    weights = np.abs(s.coeffs) ** 2 * np.abs(s.frequencies)
    magnitudes = np.abs(s.frequencies)
    sums = []
    total = 0.0
    lower = 1
    while lower <= s.max_freq:
        total += float(np.sum(weights[(magnitudes >= lower) & (magnitudes < 2 * lower)]))
        sums.append(total)
        lower *= 2
    return sums


def decay_profile(s: FourierSeries, max_freq: Optional[int] = None) -> DecayProfile:
    """Band maxima of |k| |c_k| for 1 <= |k| <= min(max_freq, M)"""
    limit = s.max_freq if max_freq is None else min(max_freq, s.max_freq)
    scaled = np.abs(s.frequencies) * np.abs(s.coeffs)
    magnitudes = np.abs(s.frequencies)
    band_maxima = []
    lower = 1
    while lower <= limit:
        mask = (magnitudes >= lower) & (magnitudes < 2 * lower) & (magnitudes <= limit)
        band_maxima.append(float(np.max(scaled[mask])))
        lower *= 2
    return DecayProfile(
        max_freq=limit,
        band_maxima=band_maxima,
        global_sup=max(band_maxima, default=0.0),
    )


def _left_stieltjes_sum(g: np.ndarray, gt: np.ndarray, stride: int) -> float:
    g_sub = g[::stride]
    gt_sub = gt[::stride]
    return float(np.sum(g_sub * (np.roll(gt_sub, -1) - gt_sub))) / TWO_PI


def stieltjes_pairing(g: GridFunction, gt: GridFunction) -> float:
    """(1/2pi) int g d(gt) from cyclic left-node Riemann-Stieltjes sums.

    For band-limited input the left sum on step D equals sum_k |c_k|^2 |k| sinc(k D), whose
    error is even in D; two Richardson steps over the strides 1, 2, 4 remove the D^2 and D^4
    terms. The stride-4 sum aliases frequencies at or above n/8, so the sinc form and with it the
    extrapolation assume input band-limited to |k| < n/8; the leftover error is of order
    (k D)^6 for the top frequency k.
    """
    if g.n != gt.n:
        raise GridMismatchError(f"grid sizes differ: {g.n} vs {gt.n}")
    values = _require_real(g, "stieltjes_pairing")
    integrator = _require_real(gt, "stieltjes_pairing")
    fine, middle, coarse = (_left_stieltjes_sum(values, integrator, stride) for stride in (1, 2, 4))
    first = (4.0 * fine - middle) / 3.0
    second = (4.0 * middle - coarse) / 3.0
    return (16.0 * first - second) / 15.0


def fejer_conjugate_sup(epsilon_rule, N: int, n: Optional[int] = None) -> Tuple[float, float]:
    """(grid sup of sigma_N(g~), closed form) for g = sum_{k <= N} eps(k)/k sin kt.

    Every cosine coefficient of sigma_N(g~) is negative, so the sup is |sigma_N(g~)(0)|.
    """
    if N < 2:
        raise AnalysisError(f"N must be >= 2, got {N}")
    rule = parse_epsilon_rule(epsilon_rule)
    if n is None:
        n = max(8, next_power_of_two(4 * N))
    if n < 2 * (N + 1):
        raise ResolutionError(f"grid size {n} cannot resolve N={N}")

    k = np.arange(1, N + 1)
    sine_coeffs = epsilon_values(rule, N) / k
    # sin kt = (e^{ikt} - e^{-ikt}) / 2i
    g = FourierSeries.from_mapping(
        {**{int(j): -0.5j * b for j, b in zip(k, sine_coeffs)}, **{-int(j): 0.5j * b for j, b in zip(k, sine_coeffs)}},
        max_freq=N,
        real_flag=True,
    )
    samples = synthesize(fejer_sum(conjugate_spectral(g), N), n)
    computed_sup = samples.sup_norm()
    closed_form = float(np.sum(sine_coeffs * (1.0 - k / N)))
    logger.debug(f"N={N}, n={n}: computed {computed_sup:.17g}, closed form {closed_form:.17g}")
    return computed_sup, closed_form


def partial_sum_sweep(g: GridFunction, orders: Optional[Sequence[int]] = None) -> PartialSumSweep:
    """Sup-norm errors ||S_N g - g|| for N in orders (default 8, 16, ..., n/4)"""
    values = _require_real(g, "partial_sum_sweep")
    if orders is None:
        orders = []
        order = 8
        while order <= g.n // 4:
            orders.append(order)
            order *= 2
    series = analyze(g)
    errors = [
        float(np.max(np.abs(synthesize(partial_sum(series, order), g.n).values - values)))
        for order in orders
    ]
    nonincreasing = all(later <= earlier + MONOTONE_SLACK for earlier, later in zip(errors, errors[1:]))
    return PartialSumSweep(orders=list(orders), sup_errors=errors, nonincreasing=nonincreasing)
