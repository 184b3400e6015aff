import math

TWO_PI = 2.0 * math.pi

DEFAULT_OPTIONS = {
    "GRID": 2048,  # Default grid size for a solve (power of two)
    "TOL": 1e-10,  # Solver residual sup-norm target
    "DAMPING": 0.5,
    "MIN_DAMPING": 1.0 / 64.0,  # Floor for adaptive damping reductions
    "CONTINUATION_STEPS": 4,
    "MAX_ITER": 2000,  # Damped iterations allowed per continuation stage
    "POLISH_THRESHOLD": 1e-6,  # Residual at which the Newton-Krylov polish takes over
    "IDENTITY_TOL": 1e-8,  # Conjugate identity sup error
    "STIELTJES_GAP_TOL": 1e-4,
    "TV_REFINEMENT_TOL": 1e-5,
    "TV_SLACK": 1e-9,  # Added to the 4*pi bound on TV(h - id)
    "TV_OVERSAMPLE": 8,  # Refinement compares TV of the interpolant on an 8x finer grid
    "LOG_MODULUS_MAX_DELTA": 0.25,
}

EXIT_CODES = {
    "OK": 0,
    "NOT_CONVERGED": 2,
    "CHECK_FAILED": 3,
    "CONFIG_ERROR": 4,
}

ENV_LOG_LEVEL = "CIRCLECONJ_LOG_LEVEL"
ENV_OUTPUT_DIR = "CIRCLECONJ_OUTPUT_DIR"
ENV_EXPERIMENTS_DIR = "CIRCLECONJ_EXPERIMENTS_DIR"
