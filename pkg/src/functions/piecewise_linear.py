import logging
from typing import Any, Dict

import numpy as np

from src.constants import TWO_PI
from src.functions.base_function import (
    BaseFunction,
    FunctionParameter,
    MalformedParametersError,
    as_finite,
)

logger = logging.getLogger("functions.piecewise_linear")


class PiecewiseLinearFunction(BaseFunction):
    """Periodic linear interpolation through nodes [[t, v], ...], t in [0, 2*pi)"""
    kind = "piecewise_linear"
    description = "Periodic piecewise-linear function through nodes [[t, v], ...]"
    parameters = [
        FunctionParameter("nodes", True, list, "List of [t, v] with strictly increasing t in [0, 2*pi)"),
    ]

    def validate_params(self, params: Dict[str, Any]) -> Dict[str, Any]:
        self._check_declared(params)
        nodes = params["nodes"]
        if not nodes:
            raise MalformedParametersError(f"{self.kind}: at least one node is required")
        positions, values = [], []
        for node in nodes:
            if not isinstance(node, (list, tuple)) or len(node) != 2:
                raise MalformedParametersError(f"{self.kind}: each node must be [t, v], got {node!r}")
            positions.append(as_finite(node[0], "t", self.kind))
            values.append(as_finite(node[1], "v", self.kind))
        self.positions = np.asarray(positions)
        self.values = np.asarray(values)
        if self.positions[0] < 0.0 or self.positions[-1] >= TWO_PI:
            raise MalformedParametersError(f"{self.kind}: node positions must lie in [0, 2*pi)")
        if np.any(np.diff(self.positions) <= 0.0):
            raise MalformedParametersError(f"{self.kind}: node positions must be strictly increasing")
        return params

    def _evaluate_reduced(self, points: np.ndarray) -> np.ndarray:
        return np.interp(points, self.positions, self.values, period=TWO_PI)
