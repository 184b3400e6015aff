import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.constants import DEFAULT_OPTIONS
from src.helpers import is_power_of_two


class BaseModelWithArbitraryTypes(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class FunctionSpec(BaseModel):
    """Catalog entry describing f analytically: {"kind": ..., "params": {...}}"""
    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)


class EpsilonRule(BaseModel):
    """Rule for the positive nonincreasing sequence eps(n) of the lacunary/counterexample series"""
    name: str = "inv_log"
    offset: float = 2.0
    value: float = 1.0


class SolverParams(BaseModel):
    n: int = DEFAULT_OPTIONS["GRID"]
    damping: float = DEFAULT_OPTIONS["DAMPING"]
    tol: float = DEFAULT_OPTIONS["TOL"]
    max_iter: int = DEFAULT_OPTIONS["MAX_ITER"]
    continuation_steps: int = DEFAULT_OPTIONS["CONTINUATION_STEPS"]
    polish: bool = True
    polish_threshold: float = DEFAULT_OPTIONS["POLISH_THRESHOLD"]

    @field_validator("n")
    @classmethod
    def _check_n(cls, n: int) -> int:
        if not is_power_of_two(n) or n < 8:
            raise ValueError(f"grid size must be a power of two >= 8, got {n}")
        return n

    @field_validator("damping")
    @classmethod
    def _check_damping(cls, damping: float) -> float:
        if not 0.0 < damping <= 1.0:
            raise ValueError(f"damping must lie in (0, 1], got {damping}")
        return damping

    @field_validator("tol", "polish_threshold")
    @classmethod
    def _check_positive(cls, value: float) -> float:
        if not value > 0.0:
            raise ValueError("tolerances must be positive")
        return value

    @field_validator("max_iter", "continuation_steps")
    @classmethod
    def _check_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError("iteration counts must be >= 1")
        return value


class CheckFlags(BaseModel):
    conjugate_identity: bool = True
    bounded_variation: bool = True
    log_modulus: bool = True
    decay: bool = True
    sobolev: bool = True
    partial_sums: bool = True
    branch: bool = True
    oracle: bool = True
    refinement: bool = False

    def enabled(self) -> List[str]:
        return [name for name, flag in self.model_dump().items() if flag]


class Tolerances(BaseModel):
    identity: float = DEFAULT_OPTIONS["IDENTITY_TOL"]
    stieltjes_gap: float = DEFAULT_OPTIONS["STIELTJES_GAP_TOL"]
    tv_refinement: float = DEFAULT_OPTIONS["TV_REFINEMENT_TOL"]
    tv_slack: float = DEFAULT_OPTIONS["TV_SLACK"]


class ExperimentConfig(BaseModel):
    name: str
    function: FunctionSpec
    solver: SolverParams = Field(default_factory=SolverParams)
    checks: CheckFlags = Field(default_factory=CheckFlags)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    output_dir: Optional[str] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "ExperimentConfig":
        # Imported lazily: the catalog itself depends on these types
        from src.function_catalog import FunctionCatalog
        FunctionCatalog().resolve(self.function)
        return self


# Report records

class SolveSummary(BaseModel):
    residual: float
    iterations: int
    converged: bool
    constant_c: float
    final_damping: Optional[float] = None
    polished: bool = False
    repair_active: bool = False


class ConjugateIdentityCheck(BaseModel):
    sup_error: float
    tolerance: float
    passed: bool


class VariationCheck(BaseModel):
    tv_conjugate: float
    tv_h_minus_id: float
    bound: float
    passed: bool


class LogModulusCheck(BaseModel):
    deltas: List[float]
    h_modulus: List[float]
    conjugate_modulus: List[float]
    h_statistic: float
    conjugate_statistic: float


class DecayProfile(BaseModel):
    """Per-band maxima of |k| |c_k| over 2^m <= |k| < 2^(m+1), plus the global sup"""
    max_freq: int
    band_maxima: List[float]
    global_sup: float


class SobolevCheck(BaseModel):
    sobolev_half: float
    stieltjes_pairing: float
    gap: float
    tolerance: float
    band_sums: List[float]
    passed: bool


class PartialSumSweep(BaseModel):
    orders: List[int]
    sup_errors: List[float]
    nonincreasing: bool


class BranchCheck(BaseModel):
    winding_number: int
    phase_increment_turns: int
    phase_oscillation: float
    passed: bool


class OracleCheck(BaseModel):
    """Distance to the exact boundary correspondence; not applicable unless f comes from z + beta z^2"""
    applicable: bool
    beta: Optional[float] = None
    sup_error: Optional[float] = None
    exact_residual: Optional[float] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None


class RefinementCheck(BaseModel):
    n_fine: int
    tv_h_minus_id: float
    tv_h_minus_id_fine: float
    difference: float
    tolerance: float
    converged_fine: bool
    passed: bool


class CheckResults(BaseModel):
    conjugate_identity: Optional[ConjugateIdentityCheck] = None
    bounded_variation: Optional[VariationCheck] = None
    log_modulus: Optional[LogModulusCheck] = None
    decay: Optional[DecayProfile] = None
    sobolev: Optional[SobolevCheck] = None
    partial_sums: Optional[PartialSumSweep] = None
    branch: Optional[BranchCheck] = None
    oracle: Optional[OracleCheck] = None
    refinement: Optional[RefinementCheck] = None

    def failures(self) -> List[str]:
        failed = []
        for name in type(self).model_fields:
            entry = getattr(self, name)
            if entry is not None and getattr(entry, "passed", True) is False:
                failed.append(name)
        return failed


class GridInfo(BaseModel):
    n: int
    grid_sizes: List[int]


class ReportTimestamps(BaseModel):
    started: str
    finished: str


class VerificationReport(BaseModel):
    config: ExperimentConfig
    grid: GridInfo
    solve: SolveSummary
    checks: CheckResults
    timestamps: ReportTimestamps

    def payload(self) -> Dict[str, Any]:
        """Report content without the timestamps, the part that is deterministic"""
        return self.model_dump(mode="json", exclude={"timestamps"})

    def payload_json(self) -> str:
        return json.dumps(self.payload(), indent=2, ensure_ascii=False)


class CounterexampleRow(BaseModel):
    N: int
    computed_sup: float
    closed_form: float
