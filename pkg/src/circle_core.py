"""
Representations of 2*pi-periodic functions and circle homeomorphisms.

Samples live on the uniform dyadic grid t_j = 2*pi*j/n. Fourier coefficients use the
1/n-forward convention, so c_k of a trigonometric polynomial equals its analytic
Fourier coefficient. Homeomorphisms are stored as lifts: strictly increasing values
h(t_0), ..., h(t_n) with h(t_n) = h(t_0) + 2*pi.
"""

import logging
from typing import Callable, Dict, Optional, Union

import numpy as np
from pydantic import field_validator, model_validator

from src.constants import TWO_PI
from src.function_catalog import evaluate
from src.helpers import grid_nodes, is_power_of_two
from src.types import BaseModelWithArbitraryTypes, FunctionSpec

logger = logging.getLogger("circle_core")

HERMITIAN_TOL = 1e-12


class CircleCoreError(Exception):
    """Base exception for sampled-function and homeomorphism errors"""
    pass


class InvalidGridError(CircleCoreError):
    """Raised when a grid size or sample vector violates the grid invariants"""
    pass


class InvalidHomeomorphismError(CircleCoreError):
    """Raised when a lift is not strictly increasing or not of degree one"""
    pass


def _check_grid_size(n: int) -> None:
    if not is_power_of_two(n) or n < 8:
        raise InvalidGridError(f"grid size must be a power of two >= 8, got {n}")


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class GridFunction(BaseModelWithArbitraryTypes):
    """Samples value[j] = g(t_j) of a 2*pi-periodic function, real or complex"""
    n: int
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, values):
        array = np.array(values)
        if not np.iscomplexobj(array):
            array = array.astype(float)
        return _readonly(array)

    @model_validator(mode="after")
    def _check_samples(self) -> "GridFunction":
        _check_grid_size(self.n)
        if self.values.ndim != 1 or self.values.shape[0] != self.n:
            raise InvalidGridError(f"expected {self.n} samples, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise InvalidGridError("samples must be finite")
        return self

    @classmethod
    def from_values(cls, values) -> "GridFunction":
        array = np.asarray(values)
        return cls(n=int(array.shape[0]), values=array)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], n: int) -> "GridFunction":
        _check_grid_size(n)
        return cls(n=n, values=func(grid_nodes(n)))

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def nodes(self) -> np.ndarray:
        return grid_nodes(self.n)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


class FourierSeries(BaseModelWithArbitraryTypes):
    """Truncated coefficient vector c_k, |k| <= max_freq, stored at index k + max_freq"""
    max_freq: int
    coeffs: np.ndarray
    real_flag: bool = False

    @field_validator("coeffs", mode="before")
    @classmethod
    def _as_complex(cls, coeffs):
        return _readonly(np.array(coeffs, dtype=complex))

    @model_validator(mode="after")
    def _check_coeffs(self) -> "FourierSeries":
        if self.max_freq < 0:
            raise CircleCoreError(f"max_freq must be nonnegative, got {self.max_freq}")
        if self.coeffs.shape != (2 * self.max_freq + 1,):
            raise CircleCoreError(
                f"expected {2 * self.max_freq + 1} coefficients, got shape {self.coeffs.shape}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise CircleCoreError("coefficients must be finite")
        if self.real_flag:
            asymmetry = np.max(np.abs(self.coeffs - np.conj(self.coeffs[::-1])))
            if asymmetry > HERMITIAN_TOL:
                raise CircleCoreError(f"real series is not Hermitian (defect {asymmetry:.3e})")
        return self

    @classmethod
    def zeros(cls, max_freq: int = 0, real_flag: bool = True) -> "FourierSeries":
        return cls(max_freq=max_freq, coeffs=np.zeros(2 * max_freq + 1), real_flag=real_flag)

    @classmethod
    def from_mapping(
        cls, mapping: Dict[int, complex], max_freq: Optional[int] = None, real_flag: bool = False
    ) -> "FourierSeries":
        if max_freq is None:
            max_freq = max((abs(k) for k in mapping), default=0)
        coeffs = np.zeros(2 * max_freq + 1, dtype=complex)
        for k, value in mapping.items():
            coeffs[k + max_freq] = value
        return cls(max_freq=max_freq, coeffs=coeffs, real_flag=real_flag)

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.max_freq, self.max_freq + 1)

    def coefficient(self, k: int) -> complex:
        if abs(k) > self.max_freq:
            return 0j
        return complex(self.coeffs[k + self.max_freq])

    def with_coeffs(self, coeffs: np.ndarray, real_flag: Optional[bool] = None) -> "FourierSeries":
        flag = self.real_flag if real_flag is None else real_flag
        return FourierSeries(max_freq=self.max_freq, coeffs=coeffs, real_flag=flag)

    def rotated(self, shift: float) -> "FourierSeries":
        """Coefficients of g(t + shift): c_k -> c_k e^{ik shift}"""
        return self.with_coeffs(self.coeffs * np.exp(1j * self.frequencies * shift))

    def truncated(self, order: int) -> "FourierSeries":
        order = min(order, self.max_freq)
        lo = self.max_freq - order
        return FourierSeries(
            max_freq=order,
            coeffs=self.coeffs[lo:lo + 2 * order + 1],
            real_flag=self.real_flag,
        )


class CircleHomeomorphism(BaseModelWithArbitraryTypes):
    """Lift of an orientation-preserving circle homeomorphism, lift[j] = h(t_j), j = 0..n"""
    n: int
    lift: np.ndarray

    @field_validator("lift", mode="before")
    @classmethod
    def _as_array(cls, lift):
        return _readonly(np.array(lift, dtype=float))

    @model_validator(mode="after")
    def _check_lift(self) -> "CircleHomeomorphism":
        _check_grid_size(self.n)
        if self.lift.shape != (self.n + 1,):
            raise InvalidHomeomorphismError(f"expected {self.n + 1} lift values, got shape {self.lift.shape}")
        if not np.all(np.isfinite(self.lift)):
            raise InvalidHomeomorphismError("lift values must be finite")
        if self.lift[self.n] != self.lift[0] + TWO_PI:
            raise InvalidHomeomorphismError("lift must satisfy lift[n] = lift[0] + 2*pi")
        steps = np.diff(self.lift)
        if not np.all(steps > 0.0):
            worst = int(np.argmin(steps))
            raise InvalidHomeomorphismError(
                f"lift is not strictly increasing (step {steps[worst]:.3e} at node {worst})"
            )
        return self

    @classmethod
    def from_values(cls, values) -> "CircleHomeomorphism":
        """Build from h(t_0), ..., h(t_{n-1}); the closing node is added as h(t_0) + 2*pi"""
        values = np.asarray(values, dtype=float)
        return cls(n=int(values.shape[0]), lift=np.append(values, values[0] + TWO_PI))

    @classmethod
    def identity(cls, n: int) -> "CircleHomeomorphism":
        _check_grid_size(n)
        return cls.from_values(grid_nodes(n))

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], n: int) -> "CircleHomeomorphism":
        _check_grid_size(n)
        return cls.from_values(func(grid_nodes(n)))

    @property
    def values(self) -> np.ndarray:
        return self.lift[:self.n]

    @property
    def nodes(self) -> np.ndarray:
        return grid_nodes(self.n)

    def displacement(self) -> GridFunction:
        """Samples of the periodic function h - id"""
        return GridFunction(n=self.n, values=self.values - self.nodes)


def analyze(g: GridFunction) -> FourierSeries:
    """c_k = (1/n) sum_j g(t_j) e^{-ik t_j} for |k| <= n/2 - 1"""
    n = g.n
    max_freq = n // 2 - 1
    if g.is_real:
        positive = np.fft.rfft(g.values)[:max_freq + 1] / n
        positive[0] = positive[0].real
        coeffs = np.concatenate([np.conj(positive[:0:-1]), positive])
        return FourierSeries(max_freq=max_freq, coeffs=coeffs, real_flag=True)
    spectrum = np.fft.fft(g.values) / n
    coeffs = spectrum[np.arange(-max_freq, max_freq + 1) % n]
    return FourierSeries(max_freq=max_freq, coeffs=coeffs, real_flag=False)


def synthesize(s: FourierSeries, n: int) -> GridFunction:
    """Samples of sum_{|k| <= M} c_k e^{ikt} on the n-grid"""
    _check_grid_size(n)
    if n < 2 * (s.max_freq + 1):
        raise InvalidGridError(f"grid size {n} too small for max_freq {s.max_freq}, need >= {2 * (s.max_freq + 1)}")
    M = s.max_freq
    if s.real_flag:
        half = np.zeros(n // 2 + 1, dtype=complex)
        half[:M + 1] = s.coeffs[M:] * n
        return GridFunction(n=n, values=np.fft.irfft(half, n))
    full = np.zeros(n, dtype=complex)
    full[s.frequencies % n] = s.coeffs * n
    return GridFunction(n=n, values=np.fft.ifft(full))


def evaluate_series(s: FourierSeries, points) -> np.ndarray:
    """Trigonometric synthesis of s at arbitrary points"""
    points = np.asarray(points, dtype=float)
    phases = np.exp(1j * np.multiply.outer(points, s.frequencies))
    values = phases @ s.coeffs
    return values.real if s.real_flag else values


def trig_poly_spec_from_series(s: FourierSeries) -> FunctionSpec:
    """Package a real series as a trig_poly catalog entry (a_k = 2 Re c_k, b_k = -2 Im c_k)"""
    if not s.real_flag:
        raise CircleCoreError("only real series can be packaged as trig_poly")
    terms = [[0, float(s.coefficient(0).real), 0.0]]
    for k in range(1, s.max_freq + 1):
        c = s.coefficient(k)
        if c != 0:
            terms.append([k, 2.0 * c.real, -2.0 * c.imag])
    return FunctionSpec(kind="trig_poly", params={"terms": terms})


def compose(f: FunctionSpec, h: CircleHomeomorphism) -> GridFunction:
    """Samples of f o h: f evaluated exactly at the off-grid points h(t_j)"""
    return GridFunction(n=h.n, values=evaluate(f, h.values))


def interpolate_homeomorphism(h: CircleHomeomorphism, t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Piecewise-linear interpolation of the lift, extended by h(t + 2*pi) = h(t) + 2*pi"""
    t_array = np.asarray(t, dtype=float)
    turns = np.floor(t_array / TWO_PI)
    knots = np.append(h.nodes, TWO_PI)
    values = np.interp(t_array - turns * TWO_PI, knots, h.lift) + turns * TWO_PI
    if np.ndim(t) == 0:
        return float(values)
    return values
