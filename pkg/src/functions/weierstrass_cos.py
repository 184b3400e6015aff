import logging
from typing import Any, Dict

import numpy as np

from src.functions.base_function import (
    BaseFunction,
    FunctionParameter,
    MalformedParametersError,
    as_finite,
    as_int,
)

logger = logging.getLogger("functions.weierstrass_cos")


class WeierstrassCosFunction(BaseFunction):
    """Truncated Weierstrass series sum_{n=0}^{terms-1} a^n cos(b^n t)"""
    kind = "weierstrass_cos"
    description = "Truncated Weierstrass series sum a^n cos(b^n t), 0 < |a| < 1, integer b >= 1"
    parameters = [
        FunctionParameter("a", True, (int, float), "Amplitude ratio, 0 < |a| < 1"),
        FunctionParameter("b", True, (int, float), "Integer frequency ratio b >= 1"),
        FunctionParameter("terms", True, (int, float), "Number of terms >= 1"),
    ]

    def validate_params(self, params: Dict[str, Any]) -> Dict[str, Any]:
        self._check_declared(params)
        self.a = as_finite(params["a"], "a", self.kind)
        self.b = as_int(params["b"], "b", self.kind)
        self.terms = as_int(params["terms"], "terms", self.kind)
        if not 0.0 < abs(self.a) < 1.0:
            raise MalformedParametersError(f"{self.kind}: 'a' must satisfy 0 < |a| < 1")
        if self.b < 1:
            # Non-integer or zero b would break 2*pi-periodicity
            raise MalformedParametersError(f"{self.kind}: 'b' must be an integer >= 1")
        if self.terms < 1:
            raise MalformedParametersError(f"{self.kind}: 'terms' must be >= 1")
        return params

    def _evaluate_reduced(self, points: np.ndarray) -> np.ndarray:
        values = np.zeros_like(points)
        for n in range(self.terms):
            values += self.a ** n * np.cos(float(self.b ** n) * points)
        return values
