import logging
from typing import Any, Dict

import numpy as np

from src.functions.base_function import (
    BaseFunction,
    FunctionParameter,
    MalformedParametersError,
    as_finite,
)

logger = logging.getLogger("functions.log_radius_of_map")

MAX_NEWTON_STEPS = 60


class LogRadiusOfMapFunction(BaseFunction):
    """Log of the radial function of the image of the unit circle under G(z) = z + beta*z^2.

    The boundary point G(e^{it}) sits at polar angle theta(t) = t + arg(1 + beta e^{it})
    and radius rho(t) = |1 + beta e^{it}|. The represented function is f(theta(t)) = log rho(t);
    evaluation inverts theta by safeguarded Newton steps, so f is exact to machine precision.
    """
    kind = "log_radius_of_map"
    description = "log radius of the star-like image of the disk under z + beta*z^2, |beta| < 1/2"
    parameters = [
        FunctionParameter("beta", True, (int, float), "Quadratic coefficient, |beta| < 1/2"),
    ]

    def validate_params(self, params: Dict[str, Any]) -> Dict[str, Any]:
        self._check_declared(params)
        self.beta = as_finite(params["beta"], "beta", self.kind)
        if abs(self.beta) >= 0.5:
            # theta'(t) = 1 + Re(beta z/(1 + beta z)) stays positive only for |beta| < 1/2
            raise MalformedParametersError(f"{self.kind}: 'beta' must satisfy |beta| < 1/2")
        return params

    def boundary_angle(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return t + np.arctan2(self.beta * np.sin(t), 1.0 + self.beta * np.cos(t))

    def boundary_log_radius(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.log(np.abs(1.0 + self.beta * np.exp(1j * t)))

    def boundary_angle_derivative(self, t: np.ndarray) -> np.ndarray:
        z = np.exp(1j * np.asarray(t, dtype=float))
        return 1.0 + (self.beta * z / (1.0 + self.beta * z)).real

    def invert_boundary_angle(self, theta: np.ndarray) -> np.ndarray:
        """Solve theta(t) = theta for t"""
        theta = np.asarray(theta, dtype=float)
        if self.beta == 0.0:
            return theta.copy()
        # |theta(t) - t| <= arcsin|beta| brackets the root
        spread = np.arcsin(abs(self.beta))
        lo, hi = theta - spread, theta + spread
        t = theta.copy()
        scale = 1.0 + float(np.max(np.abs(theta), initial=0.0))
        for _ in range(MAX_NEWTON_STEPS):
            mismatch = self.boundary_angle(t) - theta
            lo = np.where(mismatch < 0.0, t, lo)
            hi = np.where(mismatch > 0.0, t, hi)
            t_next = t - mismatch / self.boundary_angle_derivative(t)
            outside = (t_next < lo) | (t_next > hi)
            t_next = np.where(outside, 0.5 * (lo + hi), t_next)
            step = float(np.max(np.abs(t_next - t), initial=0.0))
            t = t_next
            if step <= 1e-15 * scale:
                break
        else:
            logger.warning(f"⚠️ Boundary angle inversion stopped after {MAX_NEWTON_STEPS} steps")
        return t

    def _evaluate_reduced(self, points: np.ndarray) -> np.ndarray:
        return self.boundary_log_radius(self.invert_boundary_angle(points))
