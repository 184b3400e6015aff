"""
Boundary correspondence of the conformal map onto the star-like domain bounded by
gamma(t) = exp(f(t) + it).

If G maps the disk onto that domain with G(0) = 0, then G(e^{it}) = exp(f(h(t)) + i h(t))
and the conjugate of f o h equals h - id up to an additive constant. With the zero-mean
conjugation operator K this is the fixed-point equation

    u = K[f o (id + u)],    h = id + u,

solved here by damped iteration with continuation in the amplitude of f, optionally
finished by a Newton-Krylov solve of the same discrete equation.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.optimize import NoConvergence, isotonic_regression, newton_krylov

from src.circle_core import CircleCoreError, CircleHomeomorphism, GridFunction, compose
from src.conjugation import conjugate_grid
from src.constants import DEFAULT_OPTIONS, TWO_PI
from src.function_catalog import FunctionCatalog, evaluate
from src.functions import BaseFunction, LogRadiusOfMapFunction
from src.helpers import grid_nodes, is_power_of_two
from src.types import BaseModelWithArbitraryTypes, FunctionSpec, SolverParams

logger = logging.getLogger("theodorsen_solver")

GROWTH_FACTOR = 2.0  # A damped step may not exceed this multiple of the best residual
NEWTON_MAX_STEPS = 40
REPAIR_GAP = 1e-12  # Minimal lift step after monotone repair, far above the ulp of 4*pi
STARLIKE_CHECK_POINTS = 8192
MAX_GROUND_TRUTH_BETA = 0.3


class SolverError(Exception):
    """Base exception for boundary correspondence solver errors"""
    pass


class MonotoneRepairError(SolverError):
    """Raised when an iterate cannot be made a strictly increasing degree-one lift"""
    pass


class GroundTruthError(SolverError):
    """Raised when the explicit-map oracle cannot be built"""
    pass


class StarlikenessError(GroundTruthError):
    """Raised when the oracle image fails the numerical star-likeness test"""
    pass


class SolveOutcome(BaseModelWithArbitraryTypes):
    h: CircleHomeomorphism
    residual: float
    iterations: int
    converged: bool
    constant_c: float
    tol: float
    final_damping: float
    polished: bool = False
    repair_active: bool = False
    residual_history: List[float] = []

    @model_validator(mode="after")
    def _check_converged(self) -> "SolveOutcome":
        if self.converged and not self.residual <= self.tol:
            raise SolverError(f"outcome marked converged with residual {self.residual:.3e} > tol {self.tol:.3e}")
        return self


class BranchDiagnostics(BaseModel):
    """Total increment (in turns) and oscillation of the phase h - id - K[f o h]"""
    phase_increment_turns: int
    phase_oscillation: float


class _BoundaryEquation:
    """Discrete map u -> K[scale * f(t + u)] on the n-grid"""

    def __init__(self, function: BaseFunction, nodes: np.ndarray, scale: float):
        self.function = function
        self.nodes = nodes
        self.n = nodes.shape[0]
        self.scale = scale

    def conjugate_term(self, u: np.ndarray) -> np.ndarray:
        samples = self.function.evaluate(self.nodes + u)
        if self.scale != 1.0:
            samples = self.scale * samples
        return conjugate_grid(GridFunction(n=self.n, values=samples)).values

    def residual(self, u: np.ndarray, term: Optional[np.ndarray] = None) -> float:
        if term is None:
            term = self.conjugate_term(u)
        return float(np.max(np.abs(u - np.mean(u) - term)))


def _is_strict_lift(values: np.ndarray) -> bool:
    return bool(np.all(np.diff(np.append(values, values[0] + TWO_PI)) > 0.0))


def monotone_repair(nodes: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Project id + u onto strictly increasing degree-one lifts.

    Pool-adjacent-violators gives the nearest nondecreasing lift. Every step is then raised
    to at least REPAIR_GAP by the smallest linear-in-index correction, which survives the
    round trip through u = lift - nodes.
    """
    values = nodes + u
    if not np.all(np.isfinite(values)):
        raise MonotoneRepairError("iterate has non-finite values")
    if _is_strict_lift(values):
        return u
    pooled = np.asarray(isotonic_regression(values).x, dtype=float)
    ramp = REPAIR_GAP * np.arange(pooled.shape[0])
    repaired = np.maximum.accumulate(pooled - ramp) + ramp
    if not repaired[-1] + REPAIR_GAP <= repaired[0] + TWO_PI:
        raise MonotoneRepairError("iterate cannot be repaired into a degree-one lift")
    logger.debug(f"Monotone repair moved the lift by {np.max(np.abs(repaired - values)):.3e}")
    return repaired - nodes


def _as_homeomorphism(nodes: np.ndarray, u: np.ndarray) -> CircleHomeomorphism:
    try:
        return CircleHomeomorphism.from_values(nodes + u)
    except CircleCoreError:
        return CircleHomeomorphism.from_values(nodes + monotone_repair(nodes, u))


def _damped_iteration(
    equation: _BoundaryEquation,
    u: np.ndarray,
    damping: float,
    target: float,
    max_iter: int,
    stop_at: float = 0.0,
    repaired: bool = False,
) -> Tuple[np.ndarray, float, int, List[float], bool]:
    """u <- (1 - d) u + d K[f o (id + u)] until the residual drops to target (or stop_at).

    The last element of the result tells whether the best iterate needed monotone repair;
    repaired gives that flag for the starting u.
    """
    term = equation.conjugate_term(u)
    res = equation.residual(u, term)
    best_u, best_term, best_res = u, term, res
    best_repaired = repaired
    history = [res]
    iterations = 0
    while res > target and res > stop_at and iterations < max_iter:
        raw = (1.0 - damping) * u + damping * term
        iterations += 1
        try:
            candidate = monotone_repair(equation.nodes, raw)
            candidate_term = equation.conjugate_term(candidate)
            candidate_res = equation.residual(candidate, candidate_term)
        except MonotoneRepairError:
            candidate, candidate_res = None, np.inf
        diverging = not np.isfinite(candidate_res) or candidate_res > GROWTH_FACTOR * best_res
        if diverging and damping > DEFAULT_OPTIONS["MIN_DAMPING"]:
            damping = max(0.5 * damping, DEFAULT_OPTIONS["MIN_DAMPING"])
            logger.warning(f"⚠️ Residual grew to {candidate_res:.3e}, damping reduced to {damping:g}")
            u, term, res = best_u, best_term, best_res
            continue
        if candidate is None:
            logger.warning("⚠️ Iterate could not be repaired at the minimum damping, stopping")
            break
        u, term, res = candidate, candidate_term, candidate_res
        history.append(res)
        logger.debug(f"iteration {iterations}: residual {res:.3e}")
        if res < best_res:
            best_u, best_term, best_res = u, term, res
            best_repaired = candidate is not raw
    return best_u, damping, iterations, history, best_repaired


def _newton_polish(equation: _BoundaryEquation, u: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """Newton-Krylov solve of u - K[f o (id + u)] = 0 started from u; None if it does not help"""
    start_res = equation.residual(u)
    try:
        solution = newton_krylov(
            lambda v: v - equation.conjugate_term(v),
            u,
            f_tol=0.25 * tol,
            maxiter=NEWTON_MAX_STEPS,
            method="lgmres",
        )
    except (NoConvergence, ValueError, ArithmeticError) as e:
        logger.warning(f"⚠️ Newton-Krylov polish failed: {type(e).__name__}")
        return None
    solution = np.asarray(solution, dtype=float)
    if not _is_strict_lift(equation.nodes + solution):
        logger.warning("⚠️ Newton-Krylov polish left the set of homeomorphisms, discarded")
        return None
    if not equation.residual(solution) < start_res:
        return None
    return solution


def residual(f: FunctionSpec, h: CircleHomeomorphism) -> float:
    """sup_j |(h(t_j) - t_j - m) - K[f o h](t_j)|, m = mean(h - id)"""
    conjugate = conjugate_grid(compose(f, h)).values
    displacement = h.values - h.nodes
    return float(np.max(np.abs(displacement - np.mean(displacement) - conjugate)))


def solve_boundary_correspondence(f: FunctionSpec, params: SolverParams) -> SolveOutcome:
    function = FunctionCatalog().resolve(f)
    n = params.n
    nodes = grid_nodes(n)
    steps = params.continuation_steps
    scales = np.arange(1, steps + 1) / steps

    logger.info(f"\n🔍 Solving boundary correspondence for '{f.kind}' on n={n} ({steps} continuation steps)")
    u = np.zeros(n)
    damping = params.damping
    iterations = 0
    history: List[float] = []
    polished = False
    repair_active = False
    for stage, scale in enumerate(scales, start=1):
        equation = _BoundaryEquation(function, nodes, float(scale))
        final = stage == steps
        if not final:
            target = max(params.tol, params.polish_threshold)
            u, damping, used, stage_history, repair_active = _damped_iteration(
                equation, u, damping, target, params.max_iter, repaired=repair_active
            )
            iterations += used
            history.extend(stage_history)
            logger.debug(f"stage {stage}/{steps} (scale {scale:g}): residual {stage_history[-1]:.3e}")
            continue

        stop_at = params.polish_threshold if params.polish else 0.0
        u, damping, used, stage_history, repair_active = _damped_iteration(
            equation, u, damping, params.tol, params.max_iter, stop_at=stop_at, repaired=repair_active
        )
        iterations += used
        history.extend(stage_history)
        if params.polish and equation.residual(u) > params.tol:
            polished_u = _newton_polish(equation, u, params.tol)
            if polished_u is not None:
                u = polished_u
                polished = True
                repair_active = False
            elif used < params.max_iter:
                u, damping, more, stage_history, repair_active = _damped_iteration(
                    equation, u, damping, params.tol, params.max_iter - used, repaired=repair_active
                )
                iterations += more
                history.extend(stage_history)

    h = _as_homeomorphism(nodes, u)
    final_residual = residual(f, h)
    converged = final_residual <= params.tol
    if converged:
        logger.info(f"✅ Converged after {iterations} iterations, residual {final_residual:.3e}")
    else:
        logger.warning(f"⚠️ Not converged after {iterations} iterations, best residual {final_residual:.3e}")
        if repair_active:
            logger.warning(f"⚠️ Monotone repair is active at the best iterate; n={n} may be too coarse to resolve h")
    return SolveOutcome(
        h=h,
        residual=final_residual,
        iterations=iterations,
        converged=converged,
        constant_c=-float(np.mean(h.values - nodes)),
        tol=params.tol,
        final_damping=damping,
        polished=polished,
        repair_active=repair_active,
        residual_history=history,
    )


def build_curve(f: FunctionSpec, n: int) -> np.ndarray:
    """Samples gamma_j = exp(f(t_j)) exp(i t_j) of the star-like boundary curve"""
    if not is_power_of_two(n):
        raise SolverError(f"grid size must be a power of two, got {n}")
    nodes = grid_nodes(n)
    return np.exp(evaluate(f, nodes)) * np.exp(1j * nodes)


def winding_number(points: np.ndarray) -> int:
    """Discrete winding number about 0 of the closed polygon through points"""
    points = np.asarray(points, dtype=complex)
    if np.any(points == 0):
        raise SolverError("curve passes through the origin")
    turning = np.angle(np.roll(points, -1) / points)
    return int(round(float(np.sum(turning)) / TWO_PI))


def branch_check(f: FunctionSpec, h: CircleHomeomorphism) -> BranchDiagnostics:
    """The integer branch function of the logarithm is constant iff this phase has no net turn"""
    phase = h.values - h.nodes - conjugate_grid(compose(f, h)).values
    increments = np.angle(np.exp(1j * (np.roll(phase, -1) - phase)))
    return BranchDiagnostics(
        phase_increment_turns=int(round(float(np.sum(increments)) / TWO_PI)),
        phase_oscillation=float(np.max(phase) - np.min(phase)),
    )


def synthesize_ground_truth(beta: float, n: int = DEFAULT_OPTIONS["GRID"]) -> Tuple[FunctionSpec, CircleHomeomorphism]:
    """Oracle pair (f, h_exact) from G(z) = z + beta z^2, exact on the n-grid"""
    if abs(beta) > MAX_GROUND_TRUTH_BETA:
        raise GroundTruthError(f"|beta| must be <= {MAX_GROUND_TRUTH_BETA}, got {beta}")
    z = np.exp(1j * grid_nodes(STARLIKE_CHECK_POINTS))
    # Re(z G'(z) / G(z)) > 0 on the circle characterises star-likeness about 0
    starlike = ((1.0 + 2.0 * beta * z) / (1.0 + beta * z)).real
    if not np.min(starlike) > 0.0:
        raise StarlikenessError(f"image of z + {beta}*z^2 is not star-like about 0")

    spec = FunctionSpec(kind=LogRadiusOfMapFunction.kind, params={"beta": float(beta)})
    function = LogRadiusOfMapFunction(spec.params)
    h_exact = CircleHomeomorphism.from_values(function.boundary_angle(grid_nodes(n)))
    return spec, h_exact
