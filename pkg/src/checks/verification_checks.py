import logging

import numpy as np

from src.analysis import (
    decay_profile,
    dyadic_deltas,
    homeomorphism_modulus,
    log_modulus_statistic,
    modulus_of_continuity,
    partial_sum_sweep,
    sobolev_band_sums,
    sobolev_half,
    stieltjes_pairing,
    spectral_total_variation,
    total_variation,
)
from src.check_handler import register_check
from src.circle_core import CircleHomeomorphism
from src.constants import TWO_PI
from src.functions import LogRadiusOfMapFunction
from src.theodorsen_solver import (
    branch_check,
    build_curve,
    residual,
    solve_boundary_correspondence,
    winding_number,
)
from src.types import (
    BranchCheck,
    ConjugateIdentityCheck,
    LogModulusCheck,
    OracleCheck,
    RefinementCheck,
    SobolevCheck,
    VariationCheck,
)

logger = logging.getLogger("checks.verification_checks")


@register_check("conjugate_identity")
def check_conjugate_identity(context):
    """K[f o h] against h - id - mean(h - id)"""
    displacement = context.h.values - context.h.nodes
    error = float(np.max(np.abs(context.conjugate.values - (displacement - np.mean(displacement)))))
    tolerance = context.config.tolerances.identity
    return ConjugateIdentityCheck(sup_error=error, tolerance=tolerance, passed=error <= tolerance)


@register_check("bounded_variation")
def check_bounded_variation(context):
    # An increasing lift of degree one has variation 2*pi; subtracting id adds at most 2*pi
    bound = 2.0 * TWO_PI
    tv_h = total_variation(context.h.displacement())
    return VariationCheck(
        tv_conjugate=total_variation(context.conjugate),
        tv_h_minus_id=tv_h,
        bound=bound,
        passed=tv_h <= bound + context.config.tolerances.tv_slack,
    )


@register_check("log_modulus")
def check_log_modulus(context):
    deltas = dyadic_deltas(context.h.n)
    h_modulus = homeomorphism_modulus(context.h, deltas)
    conjugate_modulus = modulus_of_continuity(context.conjugate, deltas)
    return LogModulusCheck(
        deltas=deltas,
        h_modulus=h_modulus,
        conjugate_modulus=conjugate_modulus,
        h_statistic=log_modulus_statistic(deltas, h_modulus),
        conjugate_statistic=log_modulus_statistic(deltas, conjugate_modulus),
    )


@register_check("decay")
def check_decay(context):
    return decay_profile(context.series, max_freq=context.h.n // 4)


@register_check("sobolev")
def check_sobolev(context):
    seminorm = sobolev_half(context.series)
    pairing = stieltjes_pairing(context.composed, context.conjugate)
    gap = abs(pairing - seminorm)
    tolerance = context.config.tolerances.stieltjes_gap
    return SobolevCheck(
        sobolev_half=seminorm,
        stieltjes_pairing=pairing,
        gap=gap,
        tolerance=tolerance,
        band_sums=sobolev_band_sums(context.series),
        passed=gap <= tolerance,
    )


@register_check("partial_sums")
def check_partial_sums(context):
    sweep = partial_sum_sweep(context.composed)
    if not sweep.nonincreasing:
        logger.warning("⚠️ Partial-sum errors of f o h are not monotone over the sweep")
    return sweep


@register_check("branch")
def check_branch(context):
    winding = winding_number(build_curve(context.f, context.h.n))
    diagnostics = branch_check(context.f, context.h)
    return BranchCheck(
        winding_number=winding,
        phase_increment_turns=diagnostics.phase_increment_turns,
        phase_oscillation=diagnostics.phase_oscillation,
        passed=winding == 1 and diagnostics.phase_increment_turns == 0,
    )


@register_check("oracle")
def check_oracle(context):
    if context.f.kind != LogRadiusOfMapFunction.kind:
        return OracleCheck(applicable=False)
    beta = float(context.f.params["beta"])
    h_exact = CircleHomeomorphism.from_values(LogRadiusOfMapFunction(context.f.params).boundary_angle(context.h.nodes))
    solved = context.h.values - np.mean(context.h.values - context.h.nodes)
    exact = h_exact.values - np.mean(h_exact.values - h_exact.nodes)
    error = float(np.max(np.abs(solved - exact)))
    tolerance = context.config.tolerances.identity
    return OracleCheck(
        applicable=True,
        beta=beta,
        sup_error=error,
        exact_residual=residual(context.f, h_exact),
        tolerance=tolerance,
        passed=error <= tolerance,
    )


@register_check("refinement")
def check_refinement(context):
    """Re-solve on the doubled grid and compare TV(h - id) of the two trigonometric interpolants"""
    params = context.config.solver.model_copy(update={"n": 2 * context.h.n})
    logger.info(f"\n🔍 Refinement solve on n={params.n}")
    fine = solve_boundary_correspondence(context.f, params)
    tv = spectral_total_variation(context.h.displacement())
    tv_fine = spectral_total_variation(fine.h.displacement())
    difference = abs(tv_fine - tv)
    tolerance = context.config.tolerances.tv_refinement
    return RefinementCheck(
        n_fine=params.n,
        tv_h_minus_id=tv,
        tv_h_minus_id_fine=tv_fine,
        difference=difference,
        tolerance=tolerance,
        converged_fine=fine.converged,
        passed=fine.converged and difference <= tolerance,
    )
