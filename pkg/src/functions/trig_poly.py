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

logger = logging.getLogger("functions.trig_poly")


class TrigPolyFunction(BaseFunction):
    """sum_k a_k cos kt + b_k sin kt, terms given as [[k, a_k, b_k], ...]"""
    kind = "trig_poly"
    description = "Trigonometric polynomial, terms [[k, a_k, b_k], ...]"
    parameters = [
        FunctionParameter("terms", True, list, "List of [k, a_k, b_k] with k >= 0"),
    ]

    def validate_params(self, params: Dict[str, Any]) -> Dict[str, Any]:
        self._check_declared(params)
        frequencies, cosines, sines = [], [], []
        for term in params["terms"]:
            if not isinstance(term, (list, tuple)) or len(term) != 3:
                raise MalformedParametersError(f"{self.kind}: each term must be [k, a_k, b_k], got {term!r}")
            k = as_int(term[0], "k", self.kind)
            if k < 0:
                raise MalformedParametersError(f"{self.kind}: frequencies must be nonnegative, got {k}")
            frequencies.append(k)
            cosines.append(as_finite(term[1], "a_k", self.kind))
            sines.append(as_finite(term[2], "b_k", self.kind))
        self.frequencies = np.asarray(frequencies, dtype=float)
        self.cosines = np.asarray(cosines, dtype=float)
        self.sines = np.asarray(sines, dtype=float)
        return params

    def _evaluate_reduced(self, points: np.ndarray) -> np.ndarray:
        values = np.zeros_like(points)
        for k, a, b in zip(self.frequencies, self.cosines, self.sines):
            if a:
                values += a * np.cos(k * points)
            if b:
                values += b * np.sin(k * points)
        return values
