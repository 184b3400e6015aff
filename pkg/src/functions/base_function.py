import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from src.constants import TWO_PI

logger = logging.getLogger("functions.base_function")


class FunctionCatalogError(Exception):
    """Base exception for function catalog errors"""
    pass


class UnknownFunctionKindError(FunctionCatalogError):
    """Raised when a FunctionSpec names a kind the catalog does not provide"""
    pass


class MalformedParametersError(FunctionCatalogError):
    """Raised when FunctionSpec parameters do not fit the kind"""
    pass


@dataclass
class FunctionParameter:
    name: str
    required: bool
    type: Union[type, Tuple[type, ...]]
    description: str


class BaseFunction:
    """A continuous 2*pi-periodic real function described analytically.

    Subclasses declare their parameters and implement `validate_params` and
    `_evaluate_reduced`, which only ever sees points reduced to [0, 2*pi).
    """
    kind: str = ""
    description: str = ""
    parameters: List[FunctionParameter] = []

    def __init__(self, params: Dict[str, Any]):
        self.params = self.validate_params(dict(params or {}))

    def _check_declared(self, params: Dict[str, Any]) -> None:
        errors = []
        declared = {p.name: p for p in self.parameters}
        for name in params:
            if name not in declared:
                errors.append(f"unknown parameter '{name}'")
        for param in self.parameters:
            if param.name not in params:
                if param.required:
                    errors.append(f"missing required parameter '{param.name}'")
                continue
            value = params[param.name]
            if isinstance(value, bool) or not isinstance(value, param.type):
                errors.append(f"parameter '{param.name}' has wrong type {type(value).__name__}")
        if errors:
            raise MalformedParametersError(f"{self.kind}: {', '.join(errors)}")

    def validate_params(self, params: Dict[str, Any]) -> Dict[str, Any]:
        raise NotImplementedError("Subclasses must implement validate_params")

    def _evaluate_reduced(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError("Subclasses must implement _evaluate_reduced")

    def evaluate(self, points) -> np.ndarray:
        """Pointwise values at arbitrary real points (scalar or array)"""
        points = np.asarray(points, dtype=float)
        reduced = np.mod(points, TWO_PI)
        return np.asarray(self._evaluate_reduced(reduced), dtype=float)


def as_int(value: Any, name: str, kind: str) -> int:
    """JSON may deliver integers as floats; accept only integral values"""
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not float(value).is_integer():
        raise MalformedParametersError(f"{kind}: '{name}' must be an integer, got {value!r}")
    return int(value)


def as_finite(value: Any, name: str, kind: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
        raise MalformedParametersError(f"{kind}: '{name}' must be a finite number, got {value!r}")
    return float(value)
