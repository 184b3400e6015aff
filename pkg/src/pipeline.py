import csv
import json
import logging
import os
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

import src.checks.verification_checks  # noqa: F401  (registers the checks)
from src.analysis import AnalysisError, fejer_conjugate_sup
from src.check_handler import run_checks
from src.circle_core import CircleCoreError, CircleHomeomorphism, analyze, compose
from src.conjugation import conjugate_grid
from src.constants import ENV_EXPERIMENTS_DIR, ENV_OUTPUT_DIR, EXIT_CODES
from src.functions import FunctionCatalogError, parse_epsilon_rule
from src.helpers import print_h_bar
from src.theodorsen_solver import residual, solve_boundary_correspondence, synthesize_ground_truth
from src.types import (
    CheckResults,
    CounterexampleRow,
    ExperimentConfig,
    FunctionSpec,
    GridInfo,
    ReportTimestamps,
    SolveSummary,
    VerificationReport,
)

REQUIRED_FIELDS = ["name", "function", "solver"]
SERIES_COLUMNS = ["t", "h", "f_of_h", "conjugate", "residual"]

logger = logging.getLogger("pipeline")


class ConfigError(Exception):
    """Raised when an experiment config cannot be loaded or validated"""
    pass


class SeriesFileError(Exception):
    """Raised when a series CSV does not describe a valid homeomorphism"""
    pass


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def experiments_dir() -> Path:
    return Path(os.getenv(ENV_EXPERIMENTS_DIR, "experiments"))


def output_dir(cfg: ExperimentConfig, override: Optional[Union[str, Path]] = None) -> Path:
    """--out wins over the config's output_dir, which wins over the environment"""
    if override is not None:
        return Path(override)
    if cfg.output_dir:
        return Path(cfg.output_dir)
    return Path(os.getenv(ENV_OUTPUT_DIR, "outputs"))


def load_experiment_config(source: Union[str, Path]) -> ExperimentConfig:
    """Load a config from a JSON path, or by bare name from the experiments directory"""
    path = Path(source)
    if not path.exists():
        path = experiments_dir() / f"{path.stem}.json"
    try:
        with open(path, "r", encoding="utf-8") as f:
            config_dict = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"Experiment config not found: {source}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Experiment config {path} is not valid JSON: {e}")

    if not isinstance(config_dict, dict):
        raise ConfigError(f"Experiment config {path} must be a JSON object")
    missing_fields = [field for field in REQUIRED_FIELDS if field not in config_dict]
    if missing_fields:
        raise ConfigError(f"Missing required fields: {', '.join(missing_fields)}")
    return parse_experiment_config(config_dict)


def parse_experiment_config(config_dict: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(config_dict)
    except (ValidationError, FunctionCatalogError) as e:
        raise ConfigError(f"Invalid experiment config: {e}")


def with_grid(cfg: ExperimentConfig, n: Optional[int]) -> ExperimentConfig:
    """Copy of cfg solving on grid n (re-validated)"""
    if n is None:
        return cfg
    config_dict = cfg.model_dump()
    config_dict["solver"]["n"] = n
    return parse_experiment_config(config_dict)


class ExperimentRun:
    """Everything the checks need about one (f, h) pair on one grid"""

    def __init__(self, config: ExperimentConfig, h: CircleHomeomorphism):
        self.config = config
        self.f = config.function
        self.h = h
        self.composed = compose(self.f, h)
        self.conjugate = conjugate_grid(self.composed)
        self.series = analyze(self.composed)

    def residual_samples(self) -> np.ndarray:
        displacement = self.h.values - self.h.nodes
        return displacement - np.mean(displacement) - self.conjugate.values


def run_verification(cfg: ExperimentConfig, h: CircleHomeomorphism, solve: SolveSummary,
                     started: Optional[str] = None) -> VerificationReport:
    """Run every enabled check on h; disabled checks stay null"""
    started = started or datetime.now().isoformat()
    run = ExperimentRun(cfg, h)
    logger.info(f"\n🔍 Running checks: {', '.join(cfg.checks.enabled())}")
    results = run_checks(run, cfg.checks.enabled())
    grid_sizes = [h.n, 2 * h.n] if cfg.checks.refinement else [h.n]
    return VerificationReport(
        config=cfg,
        grid=GridInfo(n=h.n, grid_sizes=grid_sizes),
        solve=solve,
        checks=CheckResults(**results),
        timestamps=ReportTimestamps(started=started, finished=datetime.now().isoformat()),
    )


def run_experiment(cfg: ExperimentConfig, out_dir: Optional[Union[str, Path]] = None,
                   write_files: bool = True) -> VerificationReport:
    started = datetime.now().isoformat()
    logger.info(f"\n🚀 Running experiment '{cfg.name}'")
    print_h_bar()
    outcome = solve_boundary_correspondence(cfg.function, cfg.solver)
    solve = SolveSummary(
        residual=outcome.residual,
        iterations=outcome.iterations,
        converged=outcome.converged,
        constant_c=outcome.constant_c,
        final_damping=outcome.final_damping,
        polished=outcome.polished,
        repair_active=outcome.repair_active,
    )
    report = run_verification(cfg, outcome.h, solve, started=started)
    if write_files:
        write_outputs(report, outcome.h, output_dir(cfg, out_dir))
    _log_summary(report)
    return report


def verify_series(cfg: ExperimentConfig, series_path: Union[str, Path],
                  out_dir: Optional[Union[str, Path]] = None, write_files: bool = True) -> VerificationReport:
    """Checks for an existing h series without solving"""
    started = datetime.now().isoformat()
    h = load_series_csv(series_path)
    value = residual(cfg.function, h)
    solve = SolveSummary(
        residual=value,
        iterations=0,
        converged=value <= cfg.solver.tol,
        constant_c=-float(np.mean(h.values - h.nodes)),
    )
    logger.info(f"\n🔍 Verifying {series_path} against '{cfg.name}' (residual {value:.3e})")
    report = run_verification(cfg, h, solve, started=started)
    if write_files:
        write_outputs(report, h, output_dir(cfg, out_dir))
    _log_summary(report)
    return report


def _log_summary(report: VerificationReport) -> None:
    print_h_bar()
    failures = report.checks.failures()
    if not report.solve.converged:
        logger.info(f"⚠️ Solver did not converge (residual {report.solve.residual:.3e})")
    if failures:
        logger.info(f"❌ Failed checks: {', '.join(failures)}")
    elif report.solve.converged:
        logger.info("✅ Converged and all enabled checks passed")


def exit_code_for(report: VerificationReport) -> int:
    if not report.solve.converged:
        return EXIT_CODES["NOT_CONVERGED"]
    if report.checks.failures():
        return EXIT_CODES["CHECK_FAILED"]
    return EXIT_CODES["OK"]


def write_outputs(report: VerificationReport, h: CircleHomeomorphism, directory: Path) -> Tuple[Path, Path]:
    directory.mkdir(parents=True, exist_ok=True)
    report_path = directory / f"{report.config.name}_report.json"
    series_path = directory / f"{report.config.name}_series.csv"
    write_report(report, report_path)
    write_series_csv(ExperimentRun(report.config, h), series_path)
    logger.info(f"✅ Wrote {report_path} and {series_path}")
    return report_path, series_path


def write_report(report: VerificationReport, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(report.model_dump(mode="json"), f, indent=2, ensure_ascii=False)
        f.write("\n")


def write_series_csv(run: ExperimentRun, path: Union[str, Path]) -> None:
    columns = zip(run.h.nodes, run.h.values, run.composed.values, run.conjugate.values, run.residual_samples())
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(SERIES_COLUMNS)
        for row in columns:
            writer.writerow([_fmt(value) for value in row])


def load_series_csv(path: Union[str, Path]) -> CircleHomeomorphism:
    """Rebuild h from the t and h columns of a series CSV"""
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
    except FileNotFoundError:
        raise SeriesFileError(f"Series file not found: {path}")
    if not rows or "t" not in rows[0] or "h" not in rows[0]:
        raise SeriesFileError(f"{path} needs 't' and 'h' columns")
    try:
        t = np.array([float(row["t"]) for row in rows])
        values = np.array([float(row["h"]) for row in rows])
        h = CircleHomeomorphism.from_values(values)
    except (ValueError, TypeError, CircleCoreError) as e:
        raise SeriesFileError(f"{path} does not hold a valid homeomorphism: {e}")
    if not np.allclose(t, h.nodes, rtol=0.0, atol=1e-12):
        raise SeriesFileError(f"{path}: column t is not the canonical grid for n={h.n}")
    return h


def run_counterexample(epsilon_rule, N_list: Sequence[int], n: Optional[int] = None) -> List[CounterexampleRow]:
    """Rows (N, computed sup of sigma_N(g~), closed form) for ascending N"""
    try:
        rule = parse_epsilon_rule(epsilon_rule)
    except FunctionCatalogError as e:
        raise ConfigError(str(e))
    if not N_list or any(later <= earlier for earlier, later in zip(N_list, N_list[1:])):
        raise ConfigError(f"N list must be nonempty and strictly ascending, got {list(N_list)}")

    logger.info(f"\n🔍 Fejer sums of the conjugate series, eps rule '{rule.name}'")
    rows = []
    for N in N_list:
        try:
            computed_sup, closed_form = fejer_conjugate_sup(rule, int(N), n)
        except (AnalysisError, FunctionCatalogError) as e:
            raise ConfigError(str(e))
        rows.append(CounterexampleRow(N=int(N), computed_sup=computed_sup, closed_form=closed_form))
        logger.info(f"N={N}: sup {computed_sup:.12f}, closed form {closed_form:.12f}")

    closed = [row.closed_form for row in rows]
    if any(later <= earlier for earlier, later in zip(closed, closed[1:])):
        logger.warning("⚠️ Closed form is not strictly increasing over N")
    return rows


def write_counterexample_csv(rows: Sequence[CounterexampleRow], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["N", "computed_sup", "closed_form"])
        for row in rows:
            writer.writerow([row.N, _fmt(row.computed_sup), _fmt(row.closed_form)])


def write_ground_truth(beta: float, n: int, directory: Union[str, Path]) -> Tuple[FunctionSpec, CircleHomeomorphism, Path, Path]:
    """Oracle spec as JSON and the exact h as a series CSV"""
    spec, h_exact = synthesize_ground_truth(beta, n)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    spec_path = directory / f"ground_truth_beta{beta:g}_function.json"
    series_path = directory / f"ground_truth_beta{beta:g}_series.csv"
    with open(spec_path, "w", encoding="utf-8") as f:
        json.dump(spec.model_dump(mode="json"), f, indent=2)
        f.write("\n")
    cfg = ExperimentConfig(name=f"ground_truth_beta{beta:g}", function=spec)
    write_series_csv(ExperimentRun(cfg, h_exact), series_path)
    logger.info(f"✅ Wrote {spec_path} and {series_path}")
    return spec, h_exact, spec_path, series_path
