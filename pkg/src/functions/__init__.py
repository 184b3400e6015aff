from src.functions.base_function import (
    BaseFunction,
    FunctionCatalogError,
    FunctionParameter,
    MalformedParametersError,
    UnknownFunctionKindError,
)
from src.functions.lacunary_sin import InvalidEpsilonRuleError, epsilon_values, parse_epsilon_rule
from src.functions.lacunary_sin import LacunarySinFunction
from src.functions.log_radius_of_map import LogRadiusOfMapFunction
from src.functions.piecewise_linear import PiecewiseLinearFunction
from src.functions.trig_poly import TrigPolyFunction
from src.functions.weierstrass_cos import WeierstrassCosFunction
