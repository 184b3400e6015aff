import logging
from typing import Optional

import numpy as np

from src.circle_core import FourierSeries, GridFunction, analyze, synthesize
from src.constants import TWO_PI

logger = logging.getLogger("conjugation")


class ConjugationError(Exception):
    """Base exception for conjugation errors"""
    pass


class QuadratureResolutionError(ConjugationError):
    """Raised when the truncation radius is below the grid spacing"""
    pass


def conjugate_spectral(s: FourierSeries) -> FourierSeries:
    """Multiplier form: c~_k = -i sgn(k) c_k, c~_0 = 0"""
    multiplier = -1j * np.sign(s.frequencies)
    return s.with_coeffs(multiplier * s.coeffs)


def conjugate_grid(g: GridFunction) -> GridFunction:
    """The zero-mean conjugation operator K applied to grid samples"""
    return synthesize(conjugate_spectral(analyze(g)), g.n)


def conjugate_quadrature(g: GridFunction, eps: Optional[float] = None) -> GridFunction:
    """Truncated principal-value integral (1/pi) int_{eps <= |t - theta| <= pi} g(theta) / (2 tan((t - theta)/2)).

    Nodes at offsets +-s are paired, so each pair contributes
    (g(t - s) - g(t + s)) / (2 tan(s/2)); the trapezoid rule runs over s in [eps, pi].
    eps defaults to one grid spacing and is rounded up to a whole number of spacings.
    """
    n = g.n
    spacing = TWO_PI / n
    if eps is None:
        eps = spacing
    if eps < spacing * (1.0 - 1e-9):
        raise QuadratureResolutionError(f"eps={eps:.3e} is below the grid spacing {spacing:.3e}")
    first = int(np.ceil(eps / spacing - 1e-9))
    last = n // 2
    if first > last:
        raise QuadratureResolutionError(f"eps={eps:.3e} exceeds pi")

    values = g.values
    result = np.zeros_like(values)
    for j in range(first, last + 1):
        half_offset = 0.5 * j * spacing
        weight = 0.5 if j in (first, last) else 1.0
        # cot(s/2) vanishes at s = pi, where the paired nodes coincide
        kernel = weight * np.cos(half_offset) / (2.0 * np.sin(half_offset))
        result += kernel * (np.roll(values, j) - np.roll(values, -j))
    return GridFunction(n=n, values=result * spacing / np.pi)


def fejer_sum(s: FourierSeries, N: int) -> FourierSeries:
    """Cesaro mean sigma_N: c_k (1 - |k|/N) for |k| <= min(N, M), zero beyond"""
    if N < 1:
        raise ConjugationError(f"Fejer order must be >= 1, got {N}")
    weights = np.clip(1.0 - np.abs(s.frequencies) / N, 0.0, None)
    return s.with_coeffs(weights * s.coeffs)


def partial_sum(s: FourierSeries, N: int) -> FourierSeries:
    """Dirichlet partial sum S_N: truncation to |k| <= N"""
    if N < 0:
        raise ConjugationError(f"partial sum order must be >= 0, got {N}")
    return s.truncated(N)
