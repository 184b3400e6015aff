import logging
from typing import Any, Dict

import numpy as np
from pydantic import ValidationError

from src.functions.base_function import (
    BaseFunction,
    FunctionParameter,
    MalformedParametersError,
    as_int,
)
from src.types import EpsilonRule

logger = logging.getLogger("functions.lacunary_sin")

EPSILON_RULES = {
    "inv_log": "eps(n) = 1/log(n + offset)",
    "inv_loglog": "eps(n) = 1/log(log(n + offset))",
    "constant": "eps(n) = value",
}


class InvalidEpsilonRuleError(MalformedParametersError):
    """Raised when an eps-rule is unknown or not positive and nonincreasing"""
    pass


def parse_epsilon_rule(raw: Any) -> EpsilonRule:
    if isinstance(raw, EpsilonRule):
        return raw
    if not isinstance(raw, dict):
        raise InvalidEpsilonRuleError(f"epsilon rule must be an object, got {raw!r}")
    try:
        return EpsilonRule(**raw)
    except (ValidationError, TypeError) as e:
        raise InvalidEpsilonRuleError(f"Invalid epsilon rule: {e}")


def epsilon_values(rule: EpsilonRule, count: int) -> np.ndarray:
    """eps(1..count), checked positive and nonincreasing"""
    if rule.name not in EPSILON_RULES:
        raise InvalidEpsilonRuleError(
            f"Unknown epsilon rule '{rule.name}', expected one of {', '.join(EPSILON_RULES)}"
        )
    n = np.arange(1, count + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if rule.name == "inv_log":
            values = 1.0 / np.log(n + rule.offset)
        elif rule.name == "inv_loglog":
            values = 1.0 / np.log(np.log(n + rule.offset))
        else:
            values = np.full_like(n, rule.value)

    if not np.all(np.isfinite(values)) or not np.all(values > 0.0):
        raise InvalidEpsilonRuleError(f"Epsilon rule {rule.name} is not positive on 1..{count}")
    if np.any(np.diff(values) > 0.0):
        raise InvalidEpsilonRuleError(f"Epsilon rule {rule.name} is not nonincreasing on 1..{count}")
    return values


class LacunarySinFunction(BaseFunction):
    """sum_{n=1}^{terms} eps(n)/n sin nt"""
    kind = "lacunary_sin"
    description = "Series sum eps(n)/n sin nt truncated after 'terms' harmonics"
    parameters = [
        FunctionParameter("epsilon_rule", True, dict, "Rule object, e.g. {\"name\": \"inv_log\", \"offset\": 2}"),
        FunctionParameter("terms", True, (int, float), "Truncation length N >= 1"),
    ]

    def validate_params(self, params: Dict[str, Any]) -> Dict[str, Any]:
        self._check_declared(params)
        self.rule = parse_epsilon_rule(params["epsilon_rule"])
        self.terms = as_int(params["terms"], "terms", self.kind)
        if self.terms < 1:
            raise MalformedParametersError(f"{self.kind}: 'terms' must be >= 1")
        self.weights = epsilon_values(self.rule, self.terms) / np.arange(1, self.terms + 1)
        return params

    def _evaluate_reduced(self, points: np.ndarray) -> np.ndarray:
        values = np.zeros_like(points)
        for n, weight in enumerate(self.weights, start=1):
            values += weight * np.sin(n * points)
        return values
