import logging
from typing import Dict, Optional, Type

import numpy as np

from src.functions import (
    BaseFunction,
    LacunarySinFunction,
    LogRadiusOfMapFunction,
    PiecewiseLinearFunction,
    TrigPolyFunction,
    UnknownFunctionKindError,
    WeierstrassCosFunction,
)
from src.types import FunctionSpec

logger = logging.getLogger("function_catalog")


class FunctionCatalog:
    def __init__(self):
        self.kinds: Dict[str, Type[BaseFunction]] = {
            cls.kind: cls
            for cls in (
                TrigPolyFunction,
                LacunarySinFunction,
                WeierstrassCosFunction,
                PiecewiseLinearFunction,
                LogRadiusOfMapFunction,
            )
        }

    def _class_name_to_type(self, kind: str) -> Optional[Type[BaseFunction]]:
        return self.kinds.get(kind)

    def resolve(self, spec: FunctionSpec) -> BaseFunction:
        """Instantiate the catalog function described by spec, validating its parameters"""
        function_class = self._class_name_to_type(spec.kind)
        if function_class is None:
            raise UnknownFunctionKindError(
                f"Unknown function kind '{spec.kind}', expected one of {', '.join(self.kinds)}"
            )
        return function_class(spec.params)

    def describe(self) -> Dict[str, str]:
        return {kind: cls.description for kind, cls in self.kinds.items()}

    def list_kinds(self) -> None:
        logger.info("\nAVAILABLE FUNCTION KINDS:")
        for kind, cls in self.kinds.items():
            logger.info(f"- {kind}: {cls.description}")
            for param in cls.parameters:
                required = "required" if param.required else "optional"
                logger.info(f"    {param.name} ({required}): {param.description}")


def evaluate(spec: FunctionSpec, points) -> np.ndarray:
    """Pointwise values of the function described by spec"""
    return FunctionCatalog().resolve(spec).evaluate(points)
